#pragma once

#include <string>

#include "cutproj/scheme.hpp"

namespace cutproj {

// JSON scheme document. Rationals are "p/q" strings and every field element is a full-length
// coefficient list in the power basis of theta. Parse errors throw ValidationFailure(MALFORMED).
std::string scheme_to_json(const SchemeSpec& spec);
SchemeSpec scheme_from_json(const std::string& text);

SchemeSpec read_scheme_file(const std::string& path);
void write_scheme_file(const std::string& path, const SchemeSpec& spec);

// A readable file path, or else a builtin name (a leading "examples/" is ignored).
SchemeSpec load_scheme(const std::string& source);

}  // namespace cutproj
