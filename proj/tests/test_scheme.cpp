#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "cutproj/builtins.hpp"
#include "cutproj/linalg.hpp"
#include "cutproj/scheme.hpp"

using namespace cutproj;

namespace {

FieldPtr golden() { return Field::make({Rat(-1), Rat(-1), Rat(1)}, Rat(1), Rat(2)); }

SchemeSpec interval_scheme(FieldPtr f, FieldVec internal, FieldVec physical, FE lo, FE hi) {
  SchemeSpec s;
  s.name = "interval";
  s.field = f;
  s.k = 2;
  s.d = 1;
  s.n = 1;
  s.proj_internal = {internal};
  s.proj_physical = {physical};
  s.halfspaces = {{{FE(f, Rat(1))}, hi}, {{FE(f, Rat(-1))}, -lo}};
  return s;
}

ValidationCode code_of(const SchemeSpec& s) {
  try {
    validate(s);
  } catch (const ValidationFailure& e) {
    return e.code();
  }
  FAIL("expected a validation failure");
  return ValidationCode::MALFORMED;
}

// Brute-force membership: N * v == sum z_j w_j for some |z_j| <= B.
bool in_scaled_span(const FE& v, const FieldVec& w, long N, int B) {
  FE target = v.mul_int(N);
  int k = static_cast<int>(w.size());
  std::vector<long> z(k, -B);
  while (true) {
    FE s(target.field(), Rat(0));
    for (int j = 0; j < k; ++j) s += w[j].mul_int(z[j]);
    if (s == target) return true;
    int j = 0;
    while (j < k && z[j] == B) z[j++] = -B;
    if (j == k) return false;
    ++z[j];
  }
}

void check_witness(const InternalSystem& s, const FieldVec& o, long N) {
  for (size_t h = 0; h < s.halfspaces.size(); ++h) {
    FE v = s.halfspaces[h].offset - dot(s.halfspaces[h].normal, o);
    CHECK(in_scaled_span(v, s.hw[h], N, 6));
  }
}

}  // namespace

TEST_CASE("validate: builtin and hand-built examples") {
  auto ab = builtin("ammann_beenker");
  CHECK(ab.sys.halfspaces.size() == 8);
  CHECK(ab.sys.vertices.size() == 8);

  auto q = Field::rationals();
  auto per = interval_scheme(q, {FE(1), FE(Rat(1, 2))}, {FE(1), FE(-1)}, FE(0), FE(1));
  CHECK(code_of(per) == ValidationCode::PERIODIC);

  auto f = golden();
  FE phi = FE::theta(f);
  auto fib = interval_scheme(f, {FE(f, Rat(1)), phi}, {FE(f, Rat(1)), FE(f, Rat(1)) - phi}, FE(f, Rat(0)), phi);
  CHECK_NOTHROW(validate(fib));
}

TEST_CASE("validate: error codes") {
  auto f = golden();
  FE phi = FE::theta(f);
  FE one(f, Rat(1)), zero(f, Rat(0));
  // Physical projection with a lattice kernel.
  CHECK(code_of(interval_scheme(f, {one, phi}, {one, -one}, zero, phi)) == ValidationCode::PHYSICAL_NOT_INJECTIVE);
  // Empty window.
  CHECK(code_of(interval_scheme(f, {one, phi}, {one, one - phi}, one, zero)) == ValidationCode::DEGENERATE_WINDOW);
  // Point window.
  CHECK(code_of(interval_scheme(f, {one, phi}, {one, one - phi}, one, one)) == ValidationCode::DEGENERATE_WINDOW);
  // Half-line.
  auto s = interval_scheme(f, {one, phi}, {one, one - phi}, zero, phi);
  s.halfspaces.pop_back();
  CHECK(code_of(s) == ValidationCode::UNBOUNDED_WINDOW);
  // Extra non-supporting half-space.
  s = interval_scheme(f, {one, phi}, {one, one - phi}, zero, phi);
  s.halfspaces.push_back({{one}, phi + one});
  auto e = code_of(s);
  CHECK(e == ValidationCode::REDUNDANT_HALFSPACE);
  // Duplicate scaled half-space.
  s = interval_scheme(f, {one, phi}, {one, one - phi}, zero, phi);
  s.halfspaces.push_back({{FE(f, Rat(2))}, phi.mul_int(2)});
  CHECK(code_of(s) == ValidationCode::REDUNDANT_HALFSPACE);
  // k != d + n.
  s = interval_scheme(f, {one, phi}, {one, one - phi}, zero, phi);
  s.k = 3;
  CHECK(code_of(s) == ValidationCode::MALFORMED);
  // Rank 1 internal image over Q in a 2-dim internal space: not dense.
  auto cf = Field::make({Rat(-2), Rat(0), Rat(0), Rat(1)}, Rat(1), Rat(2));
  FE t = FE::theta(cf), c1(cf, Rat(1)), c0(cf, Rat(0));
  SchemeSpec nd;
  nd.field = cf;
  nd.k = 3;
  nd.d = 1;
  nd.n = 2;
  nd.proj_internal = {{c1, t, c0}, {c0, c0, c1}};
  nd.proj_physical = {{t * t, c1, t}};
  nd.halfspaces = {{{c1, c0}, c1}, {{-c1, c0}, c0}, {{c0, c1}, c1}, {{c0, -c1}, c0}};
  CHECK(code_of(nd) == ValidationCode::NOT_DENSE);
}

TEST_CASE("parallel class counts") {
  CHECK(builtin("ammann_beenker").sys.num_classes() == 4);
  CHECK(builtin("golden_octagonal").sys.num_classes() == 4);
  CHECK(builtin("fibonacci").sys.num_classes() == 1);
  CHECK(builtin("dodecagonal").sys.num_classes() == 6);
  CHECK(builtin("square_product").sys.num_classes() == 2);
}

TEST_CASE("every builtin validates and re-validation is a fixed point") {
  for (auto& name : builtin_names()) {
    CAPTURE(name);
    Scheme s = builtin(name);
    Scheme t = validate(s.spec);
    CHECK(t.sys.classes == s.sys.classes);
    CHECK(t.sys.vertices.size() == s.sys.vertices.size());
    CHECK(t.sys.hw == s.sys.hw);
  }
}

TEST_CASE("homogeneity") {
  auto fib = builtin("fibonacci");
  auto h = homogeneous(fib.sys);
  CHECK(h.result == Tri::yes);
  CHECK(h.N == 1);
  check_witness(fib.sys, h.origin, 1);

  auto third = builtin("fibonacci_third");
  auto w = weakly_homogeneous(third.sys);
  CHECK(w.yes);
  CHECK(w.N == 3);
  check_witness(third.sys, w.origin, 3);
  CHECK(homogeneous(third.sys).result == Tri::no);

  auto ab = builtin("ammann_beenker");
  auto wab = weakly_homogeneous(ab.sys);
  CHECK(wab.yes);
  CHECK(wab.N == 1);
  check_witness(ab.sys, wab.origin, 1);

  auto gap = builtin("cubic_gap");
  CHECK_FALSE(weakly_homogeneous(gap.sys).yes);
  CHECK(homogeneous(gap.sys).result == Tri::no);
}

TEST_CASE("property: witnesses on all weakly homogeneous builtins") {
  for (auto& name : builtin_names()) {
    CAPTURE(name);
    auto s = builtin(name);
    auto w = weakly_homogeneous(s.sys);
    if (w.yes) check_witness(s.sys, w.origin, w.N);
  }
}

TEST_CASE("nonsingular shifts") {
  auto fib = builtin("fibonacci");
  FieldVec s = choose_nonsingular_shift(fib.sys, 1);
  CHECK(s == choose_nonsingular_shift(fib.sys, 1));
  // Exact boundary oracle over the radius-100 box.
  bool hit = false;
  for (long a = -100; a <= 100 && !hit; ++a)
    for (long b = -100; b <= 100 && !hit; ++b) {
      FieldVec x = fib.sys.project({a, b});
      x[0] += s[0];
      for (auto& h : fib.sys.halfspaces)
        if (dot(h.normal, x) == h.offset) hit = true;
    }
  CHECK_FALSE(hit);

  FieldVec zero{FE(fib.sys.field, Rat(0))};
  CHECK_FALSE(is_nonsingular_shift(fib.sys, zero));

  auto ab = builtin("ammann_beenker");
  FieldVec sab = choose_nonsingular_shift(ab.sys, 7);
  hit = false;
  for (long a = -4; a <= 4; ++a)
    for (long b = -4; b <= 4; ++b)
      for (long c = -4; c <= 4; ++c)
        for (long d = -4; d <= 4; ++d) {
          FieldVec x = ab.sys.project({a, b, c, d});
          for (int i = 0; i < 2; ++i) x[i] += sab[i];
          for (auto& h : ab.sys.halfspaces)
            if (dot(h.normal, x) == h.offset) hit = true;
        }
  CHECK_FALSE(hit);
}

TEST_CASE("canonical windows") {
  CHECK(is_canonical(builtin("ammann_beenker").sys));
  CHECK(is_canonical(builtin("fibonacci").sys));
  CHECK(is_canonical(builtin("square_product").sys));
  CHECK_FALSE(is_canonical(builtin("fibonacci_third").sys));
  CHECK_FALSE(is_canonical(builtin("dodecagonal").sys));
  // Fibonacci canonical window is [0, phi].
  auto fib = builtin("fibonacci");
  FE phi = FE::theta(fib.sys.field);
  bool has_top = false;
  for (auto& h : fib.sys.halfspaces)
    if (h.normal[0] == FE(1) && h.offset == phi) has_top = true;
  CHECK(has_top);
}
