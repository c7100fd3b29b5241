#pragma once

#include <string>
#include <vector>

#include "cutproj/scheme.hpp"

namespace cutproj {

std::vector<std::string> builtin_names();
std::string builtin_summary(const std::string& name);
// Throws std::out_of_range for an unknown name.
SchemeSpec builtin_spec(const std::string& name);
Scheme builtin(const std::string& name);

// H-representation of the projected unit cube sum_j [0,1] (e_j)_<.
std::vector<HalfSpace> canonical_window(const FieldPtr& field, const FieldMat& proj, int n, int k);
// Same point set as the canonical window (compared as normalized half-space sets).
bool is_canonical(const InternalSystem& s);

}  // namespace cutproj
