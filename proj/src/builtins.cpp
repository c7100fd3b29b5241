#include "cutproj/builtins.hpp"

#include <map>
#include <set>
#include <stdexcept>

#include "cutproj/linalg.hpp"
#include "cutproj/util.hpp"

namespace cutproj {

namespace {

FieldPtr golden() { return Field::make({Rat(-1), Rat(-1), Rat(1)}, Rat(1), Rat(2)); }
FieldPtr sqrt2() { return Field::make({Rat(-2), Rat(0), Rat(1)}, Rat(1), Rat(2)); }
FieldPtr sqrt3() { return Field::make({Rat(-3), Rat(0), Rat(1)}, Rat(1), Rat(2)); }
FieldPtr cbrt2() { return Field::make({Rat(-2), Rat(0), Rat(0), Rat(1)}, Rat(1), Rat(2)); }

FE q(const FieldPtr& f, long a, long b = 1) { return FE(f, Rat(a, b)); }

// Replaces theta by its Galois conjugate in a quadratic field.
FE conj(const FE& x) {
  const auto& f = x.field();
  if (x.degree() != 2) throw std::logic_error("conj: quadratic field expected");
  // theta' = -a1 - theta for min poly t^2 + a1 t + a0.
  Rat a1 = f->min_poly()[1];
  FE th = FE::theta(f);
  FE thc = FE(f, Rat(-a1)) - th;
  return FE(f, x.coeff(0)) + thc * FE(f, x.coeff(1));
}

FieldMat conj(const FieldMat& m) {
  FieldMat r = m;
  for (auto& row : r)
    for (auto& x : row) x = conj(x);
  return r;
}

FieldVec normalize(FieldVec v) {
  for (auto& x : v)
    if (!x.is_zero()) {
      FE s = x.sign() > 0 ? x : -x;
      for (auto& y : v) y = y / s;
      return v;
    }
  return v;
}

std::string hs_key(const HalfSpace& h) {
  for (auto& x : h.normal)
    if (!x.is_zero()) {
      FE s = x.sign() > 0 ? x : -x;
      FieldVec nv = h.normal;
      for (auto& y : nv) y = y / s;
      return vec_key(nv) + "#" + (h.offset / s).key();
    }
  return "";
}

SchemeSpec make(const std::string& name, FieldPtr f, int k, int n, FieldMat internal, FieldMat physical,
                std::vector<HalfSpace> hs) {
  SchemeSpec s;
  s.name = name;
  s.field = std::move(f);
  s.k = k;
  s.n = n;
  s.d = k - n;
  s.proj_internal = std::move(internal);
  s.proj_physical = std::move(physical);
  s.halfspaces = std::move(hs);
  return s;
}

std::vector<HalfSpace> box(const FieldPtr& f, const std::vector<std::pair<FE, FE>>& sides) {
  std::vector<HalfSpace> hs;
  int n = static_cast<int>(sides.size());
  for (int i = 0; i < n; ++i) {
    FieldVec up(n, q(f, 0)), lo(n, q(f, 0));
    up[i] = q(f, 1);
    lo[i] = q(f, -1);
    hs.push_back({up, sides[i].second});
    hs.push_back({lo, -sides[i].first});
  }
  return hs;
}

SchemeSpec fibonacci() {
  auto f = golden();
  FE phi = FE::theta(f);
  FieldMat in{{q(f, 1), phi - q(f, 1)}};
  return make("fibonacci", f, 2, 1, in, conj(in), canonical_window(f, in, 1, 2));
}

SchemeSpec fibonacci_third() {
  auto f = golden();
  FE phi = FE::theta(f);
  FieldMat in{{q(f, 1), phi - q(f, 1)}};
  return make("fibonacci_third", f, 2, 1, in, conj(in), box(f, {{q(f, 0), phi / q(f, 3)}}));
}

SchemeSpec cubic_gap() {
  auto f = cbrt2();
  FE t = FE::theta(f);
  FieldMat in{{q(f, 1), t}};
  FieldMat ph{{q(f, 1), -(t * t)}};
  return make("cubic_gap", f, 2, 1, in, ph, box(f, {{q(f, 0), t * t}}));
}

SchemeSpec ammann_beenker() {
  auto f = sqrt2();
  FE r = FE::theta(f);
  FieldMat in{{q(f, 1), -r, q(f, 0), r}, {q(f, 0), r, q(f, -1), r}};
  return make("ammann_beenker", f, 4, 2, in, conj(in), canonical_window(f, in, 2, 4));
}

SchemeSpec golden_octagonal() {
  auto f = golden();
  FE phi = FE::theta(f);
  FieldMat in{{phi, -phi, q(f, 1), q(f, 0)}, {phi, q(f, -1), q(f, 0), q(f, 1)}};
  return make("golden_octagonal", f, 4, 2, in, conj(in), canonical_window(f, in, 2, 4));
}

SchemeSpec dodecagonal() {
  auto f = sqrt3();
  FE r = FE::theta(f);
  FE h = q(f, 1, 2);
  // Columns 1, xi, xi^2, xi^3 with xi = sqrt3/2 + i/2.
  FieldMat in{{q(f, 1), r * h, h, q(f, 0)}, {q(f, 0), h, r * h, q(f, 1)}};
  std::vector<HalfSpace> hs;
  // Unit vectors at multiples of 30 degrees.
  std::vector<std::pair<FE, FE>> dirs{{q(f, 1), q(f, 0)}, {r * h, h}, {h, r * h}, {q(f, 0), q(f, 1)},
                                      {-h, r * h}, {-(r * h), h}};
  for (auto& [c, s] : dirs) hs.push_back({{c, s}, q(f, 1)});
  for (auto& [c, s] : dirs) hs.push_back({{-c, -s}, q(f, 1)});
  return make("dodecagonal", f, 4, 2, in, conj(in), hs);
}

SchemeSpec square_product() {
  auto f = golden();
  FE phi = FE::theta(f);
  FE a = phi - q(f, 1);
  FieldMat in{{q(f, 1), a, q(f, 0), q(f, 0)}, {q(f, 0), q(f, 0), q(f, 1), a}};
  return make("square_product", f, 4, 2, in, conj(in), box(f, {{q(f, 0), phi}, {q(f, 0), phi}}));
}

SchemeSpec liouville_stress() {
  // Slope 11/100 + 10^-6 + 10^-24 (1 + cbrt 2): extremely well approximated at q = 10^6 and
  // outside any quadratic field, so no continued-fraction certificate applies.
  auto f = cbrt2();
  FE t = FE::theta(f);
  Rat e24(Int(1), Int("1000000000000000000000000"));
  FE slope = FE(f, Rat(11, 100) + Rat(1, 1000000) + e24) + t * FE(f, e24);
  FieldMat in{{q(f, 1), slope}};
  FieldMat ph{{q(f, 1), -t}};
  return make("liouville_stress", f, 2, 1, in, ph, canonical_window(f, in, 1, 2));
}

SchemeSpec canonical_k3n1() {
  auto f = cbrt2();
  FE t = FE::theta(f);
  FieldMat in{{q(f, 1), t, t * t}};
  FieldMat ph{{q(f, 1), t, q(f, 0)}, {q(f, 0), q(f, 1), t}};
  return make("canonical_k3n1", f, 3, 1, in, ph, canonical_window(f, in, 1, 3));
}

SchemeSpec cubical_demo() {
  // gamma = (a1, a2, b1, b2); internal forms theta a1 - b1 and theta^2 a1 + theta a2 - b2.
  auto f = cbrt2();
  FE t = FE::theta(f);
  FieldMat in{{t, q(f, 0), q(f, -1), q(f, 0)}, {t * t, t, q(f, 0), q(f, -1)}};
  FieldMat ph{{q(f, 1), q(f, 0), t, q(f, 0)}, {q(f, 0), q(f, 1), q(f, 0), t}};
  return make("cubical_demo", f, 4, 2, in, ph, box(f, {{q(f, 0), q(f, 1)}, {q(f, 0), q(f, 1)}}));
}

SchemeSpec canonical_unequal() {
  // Columns (1,0), (0,1), (theta,theta), (theta^2,theta): pairwise independent, line groups of ranks 2, 1, 2, 1.
  auto f = cbrt2();
  FE t = FE::theta(f);
  FieldMat in{{q(f, 1), q(f, 0), t, t * t}, {q(f, 0), q(f, 1), t, t}};
  FieldMat ph{{t * t, q(f, 0), q(f, 1), q(f, 0)}, {q(f, 0), t * t, q(f, 0), q(f, 1)}};
  return make("canonical_unequal", f, 4, 2, in, ph, canonical_window(f, in, 2, 4));
}

SchemeSpec high_complexity() {
  auto f = cbrt2();
  FE t = FE::theta(f);
  FE t2 = t * t;
  FieldMat in{{q(f, 1), q(f, 0), t, t2}, {q(f, 0), q(f, 1), t2, t}};
  FieldMat ph{{t, q(f, 0), q(f, 1), q(f, 0)}, {q(f, 0), t, q(f, 0), q(f, 1)}};
  return make("high_complexity", f, 4, 2, in, ph, box(f, {{q(f, 0), q(f, 1)}, {q(f, 0), q(f, 1)}}));
}

struct Entry {
  std::string summary;
  SchemeSpec (*make)();
};

const std::map<std::string, Entry>& catalog() {
  static const std::map<std::string, Entry> c{
      {"ammann_beenker", {"octagonal 4-to-2 canonical scheme over Q(sqrt2)", ammann_beenker}},
      {"golden_octagonal", {"octagonal 4-to-2 canonical scheme over Q(phi)", golden_octagonal}},
      {"fibonacci", {"2-to-1 canonical scheme, Gamma_< = Z + phi Z, window [0, phi]", fibonacci}},
      {"fibonacci_third", {"2-to-1 scheme with window [0, phi/3]; weakly homogeneous with N = 3", fibonacci_third}},
      {"cubic_gap", {"2-to-1 scheme over Q(cbrt2) with window [0, theta^2]; not weakly homogeneous", cubic_gap}},
      {"square_product", {"product of two Fibonacci factors, square window", square_product}},
      {"cubical_demo", {"cubical 4-to-2 scheme whose forms have unequal kernel ranks", cubical_demo}},
      {"canonical_k3n1", {"3-to-1 canonical scheme with slopes (cbrt2, cbrt4)", canonical_k3n1}},
      {"canonical_unequal", {"4-to-2 canonical scheme whose line groups have unequal ranks", canonical_unequal}},
      {"liouville_stress", {"2-to-1 scheme with a near-rational slope (stress input)", liouville_stress}},
      {"dodecagonal", {"4-to-2 scheme spanned by 12th roots of unity, regular 12-gon window", dodecagonal}},
      {"high_complexity", {"4-to-2 scheme with rank-1 stabilisers; complexity exponent 4", high_complexity}},
  };
  return c;
}

}  // namespace

std::vector<std::string> builtin_names() {
  std::vector<std::string> r;
  for (auto& [k, v] : catalog()) r.push_back(k);
  return r;
}

std::string builtin_summary(const std::string& name) { return catalog().at(name).summary; }

SchemeSpec builtin_spec(const std::string& name) {
  auto it = catalog().find(name);
  if (it == catalog().end()) throw std::out_of_range("unknown builtin: " + name);
  return it->second.make();
}

Scheme builtin(const std::string& name) { return validate(builtin_spec(name)); }

std::vector<HalfSpace> canonical_window(const FieldPtr& field, const FieldMat& proj, int n, int k) {
  FieldMat cols = transpose(proj, k);
  std::vector<FieldVec> normals;
  std::set<std::string> seen;
  for_each_subset(k, n - 1, [&](const std::vector<int>& sub) {
    FieldVec nu;
    if (sub.empty()) {
      nu.assign(n, FE(field, Rat(0)));
      nu[0] = FE(field, Rat(1));
    } else {
      FieldMat a;
      for (int j : sub) a.push_back(cols[j]);
      auto ker = nullspace(a, n);
      if (ker.size() != 1) return;
      nu = ker[0];
    }
    nu = normalize(nu);
    if (seen.insert(vec_key(nu)).second) normals.push_back(nu);
  });
  std::vector<HalfSpace> hs;
  for (auto& nu : normals)
    for (int sgn : {1, -1}) {
      FieldVec v = nu;
      for (auto& x : v) x = x.mul_int(sgn);
      FE off(field, Rat(0));
      for (int j = 0; j < k; ++j) {
        FE p = dot(v, cols[j]);
        if (p.sign() > 0) off += p;
      }
      hs.push_back({v, off});
    }
  return hs;
}

bool is_canonical(const InternalSystem& s) {
  auto can = canonical_window(s.field, s.proj, s.n, s.k);
  std::set<std::string> a, b;
  for (auto& h : s.halfspaces) a.insert(hs_key(h));
  for (auto& h : can) b.insert(hs_key(h));
  return a == b;
}

}  // namespace cutproj
