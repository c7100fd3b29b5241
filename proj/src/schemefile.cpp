#include "cutproj/schemefile.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "cutproj/builtins.hpp"
#include "json.hpp"

namespace cutproj {

using Json = nlohmann::ordered_json;

namespace {

[[noreturn]] void malformed(const std::string& what) {
  throw ValidationFailure(ValidationCode::MALFORMED, "scheme file: " + what);
}

Json fe_json(const FE& x, int degree) {
  Json a = Json::array();
  for (int i = 0; i < degree; ++i) a.push_back(rat_str(i < x.degree() ? x.coeff(i) : Rat(0)));
  return a;
}

Json vec_json(const FieldVec& v, int degree) {
  Json a = Json::array();
  for (auto& x : v) a.push_back(fe_json(x, degree));
  return a;
}

Rat rat_of(const Json& j) {
  if (j.is_string()) return parse_rational(j.get<std::string>());
  if (j.is_number_integer()) return Rat(j.get<long>());
  malformed("expected a rational string, got " + j.dump());
}

FE fe_of(const Json& j, const FieldPtr& f) {
  if (!j.is_array() || static_cast<int>(j.size()) != f->degree())
    malformed("field element needs " + std::to_string(f->degree()) + " coefficients: " + j.dump());
  std::vector<Rat> c;
  for (auto& x : j) c.push_back(rat_of(x));
  return FE(f, c);
}

FieldVec vec_of(const Json& j, const FieldPtr& f, size_t len, const char* what) {
  if (!j.is_array() || j.size() != len) malformed(std::string(what) + " needs " + std::to_string(len) + " entries");
  FieldVec v;
  for (auto& x : j) v.push_back(fe_of(x, f));
  return v;
}

FieldMat mat_of(const Json& j, const FieldPtr& f, int rows, int cols, const char* what) {
  if (!j.is_array() || static_cast<int>(j.size()) != rows)
    malformed(std::string(what) + " needs " + std::to_string(rows) + " rows");
  FieldMat m;
  for (auto& r : j) m.push_back(vec_of(r, f, cols, what));
  return m;
}

const Json& at(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) malformed(std::string("missing key '") + key + "'");
  return j.at(key);
}

}  // namespace

std::string scheme_to_json(const SchemeSpec& s) {
  int D = s.field->degree();
  Json j;
  j["name"] = s.name;
  Json poly = Json::array();
  for (auto& c : s.field->integer_min_poly()) {
    if (c.fits_slong_p()) poly.push_back(c.get_si());
    else poly.push_back(c.get_str());
  }
  j["field"] = {{"min_poly", poly}, {"root_interval", {rat_str(s.field->lo()), rat_str(s.field->hi())}}};
  j["dims"] = {{"k", s.k}, {"d", s.d}, {"n", s.n}};
  Json pi = Json::array(), pp = Json::array();
  for (auto& r : s.proj_internal) pi.push_back(vec_json(r, D));
  for (auto& r : s.proj_physical) pp.push_back(vec_json(r, D));
  j["proj_internal"] = pi;
  j["proj_physical"] = pp;
  Json hs = Json::array();
  for (auto& h : s.halfspaces) hs.push_back({{"normal", vec_json(h.normal, D)}, {"offset", fe_json(h.offset, D)}});
  j["window"] = {{"halfspaces", hs}};
  if (s.window_shift) j["window"]["shift"] = vec_json(*s.window_shift, D);
  return j.dump(2) + "\n";
}

SchemeSpec scheme_from_json(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const std::exception& e) {
    malformed(std::string("not valid JSON: ") + e.what());
  }
  try {
    SchemeSpec s;
    s.name = j.contains("name") ? at(j, "name").get<std::string>() : std::string("unnamed");
    const Json& fj = at(j, "field");
    std::vector<Rat> poly;
    for (auto& c : at(fj, "min_poly")) {
      if (c.is_string()) poly.push_back(Rat(Int(c.get<std::string>())));
      else if (c.is_number_integer()) poly.push_back(Rat(c.get<long>()));
      else malformed("min_poly entries must be integers");
    }
    const Json& iv = at(fj, "root_interval");
    if (!iv.is_array() || iv.size() != 2) malformed("root_interval needs two rationals");
    Rat lo = rat_of(iv[0]), hi = rat_of(iv[1]);
    if (poly.size() == 2 && poly[0] == 0 && poly[1] != 0 && lo == -1 && hi == 1) s.field = Field::rationals();
    else s.field = Field::make(poly, lo, hi);
    const Json& dims = at(j, "dims");
    s.k = at(dims, "k").get<int>();
    s.d = at(dims, "d").get<int>();
    s.n = at(dims, "n").get<int>();
    if (s.k <= 0 || s.d < 0 || s.n <= 0 || s.k != s.d + s.n) malformed("dims must satisfy k = d + n with n >= 1");
    s.proj_internal = mat_of(at(j, "proj_internal"), s.field, s.n, s.k, "proj_internal");
    s.proj_physical = mat_of(at(j, "proj_physical"), s.field, s.d, s.k, "proj_physical");
    const Json& w = at(j, "window");
    for (auto& h : at(w, "halfspaces")) s.halfspaces.push_back({vec_of(at(h, "normal"), s.field, s.n, "normal"),
                                                                 fe_of(at(h, "offset"), s.field)});
    if (w.contains("shift")) s.window_shift = vec_of(w.at("shift"), s.field, s.n, "shift");
    return s;
  } catch (const ValidationFailure&) {
    throw;
  } catch (const std::exception& e) {
    malformed(e.what());
  }
}

SchemeSpec read_scheme_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return scheme_from_json(buf.str());
}

void write_scheme_file(const std::string& path, const SchemeSpec& spec) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << scheme_to_json(spec);
}

SchemeSpec load_scheme(const std::string& source) {
  if (std::filesystem::is_regular_file(source)) return read_scheme_file(source);
  std::string name = source;
  if (name.rfind("examples/", 0) == 0) name = name.substr(9);
  for (auto& b : builtin_names())
    if (b == name) return builtin_spec(name);
  throw std::runtime_error("no such file or builtin: " + source);
}

}  // namespace cutproj
