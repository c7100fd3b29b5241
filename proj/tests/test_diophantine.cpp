#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "cutproj/builtins.hpp"
#include "cutproj/decompose.hpp"
#include "cutproj/diophantine.hpp"
#include "cutproj/lattice_enum.hpp"

using namespace cutproj;

namespace {

FieldPtr golden() { return Field::make({Rat(-1), Rat(-1), Rat(1)}, Rat(1), Rat(2)); }
FieldPtr sqrt2() { return Field::make({Rat(-2), Rat(0), Rat(1)}, Rat(1), Rat(2)); }

// Naive CF of a positive double-backed value via long double, for the first few terms.
std::vector<long> naive_cf(long double x, int terms) {
  std::vector<long> out;
  for (int i = 0; i < terms; ++i) {
    long double a = std::floor(x);
    out.push_back(static_cast<long>(a));
    x = 1 / (x - a);
  }
  return out;
}

InternalSystem slope_system(FieldPtr f, FE alpha) {
  FieldMat proj{{FE(f, Rat(1)), alpha}};
  FE zero(f, Rat(0)), one(f, Rat(1));
  return make_internal(f, 2, 1, proj, {{{one}, one}, {{-one}, zero}});
}

// Brute force over the whole box with long double arithmetic.
double brute_min(const InternalSystem& s, long R, double delta) {
  std::vector<std::vector<long double>> p(s.n, std::vector<long double>(s.k));
  for (int r = 0; r < s.n; ++r)
    for (int j = 0; j < s.k; ++j) p[r][j] = s.proj[r][j].approx();
  std::vector<long> g(s.k, -R);
  double best = 1e300;
  while (true) {
    long eta = 0;
    for (long x : g) eta = std::max(eta, std::abs(x));
    if (eta > 0) {
      long double nm = 0;
      for (int r = 0; r < s.n; ++r) {
        long double x = 0;
        for (int j = 0; j < s.k; ++j) x += p[r][j] * g[j];
        nm = std::max(nm, std::fabs(x));
      }
      best = std::min(best, static_cast<double>(nm * std::pow(static_cast<long double>(eta), delta)));
    }
    int i = 0;
    while (i < s.k && g[i] == R) g[i++] = -R;
    if (i == s.k) break;
    ++g[i];
  }
  return best;
}

}  // namespace

TEST_CASE("continued fractions of quadratic irrationals") {
  auto f2 = sqrt2();
  auto c = cf_expand(FE::theta(f2));
  CHECK(c.preperiod == std::vector<Int>{1});
  CHECK(c.period == std::vector<Int>{2});
  CHECK(c.bound == 2);
  CHECK(cf_value(f2, c) == FE::theta(f2));

  auto g = golden();
  auto cg = cf_expand(FE::theta(g));
  CHECK(cg.period == std::vector<Int>{1});
  CHECK(cg.bound == 1);
  CHECK(cf_value(g, cg) == FE::theta(g));

  CHECK_THROWS_AS(cf_expand(FE(Rat(3, 2))), std::domain_error);
  CHECK_THROWS_AS(cf_expand(FE(g, Rat(3, 2))), std::domain_error);
  auto cubic = Field::make({Rat(-2), Rat(0), Rat(0), Rat(1)}, Rat(1), Rat(2));
  CHECK_THROWS_AS(cf_expand(FE::theta(cubic)), std::domain_error);
}

TEST_CASE("property: CF round trip and agreement with a naive expansion") {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<int> d(-9, 9), den(1, 7);
  std::vector<FieldPtr> fields{golden(), sqrt2(), Field::make({Rat(-7), Rat(0), Rat(1)}, Rat(2), Rat(3)),
                               Field::make({Rat(1, 3), Rat(-3, 2), Rat(1)}, Rat(1), Rat(2))};
  for (auto& f : fields)
    for (int it = 0; it < 25; ++it) {
      int b = d(rng);
      if (b == 0) b = 1;
      FE x(f, {Rat(d(rng), den(rng)), Rat(b, den(rng))});
      CAPTURE(x.str());
      auto c = cf_expand(x);
      CHECK_FALSE(c.period.empty());
      CHECK(cf_value(f, c) == x);
      // The first terms match a floating expansion.
      std::vector<Int> all = c.preperiod;
      while (all.size() < 6)
        for (auto& q : c.period) all.push_back(q);
      auto nv = naive_cf(static_cast<long double>(x.approx()), 4);
      for (int i = 0; i < 4; ++i) CHECK(all[i] == nv[i]);
    }
}

TEST_CASE("Fibonacci scan against a direct minimum over q") {
  auto s = builtin("fibonacci").sys;
  std::vector<long> Rl{10, 100, 1000, 10000};
  auto rep = scan(s, Rl);
  // Oracle: min over 1 <= q <= R of q * dist(q * (phi - 1), Z).
  long double a = (std::sqrt(5.0L) - 1) / 2;
  long double best = 1e9;
  size_t next = 0;
  for (long q = 1; q <= Rl.back(); ++q) {
    long double x = q * a;
    best = std::min(best, q * std::fabs(x - std::round(x)));
    if (q == Rl[next]) {
      CHECK(rep.samples[next].c_lower == doctest::Approx(static_cast<double>(best)).epsilon(1e-9));
      ++next;
    }
  }
  for (auto& smp : rep.samples) {
    CHECK(smp.c_lower >= 0.35);
    CHECK(smp.c_lower <= 0.42);
  }
  CHECK(rep.verdict == DVerdict::LIKELY_D);
  CHECK(rep.delta == Rat(1));
}

TEST_CASE("scan invariants") {
  for (std::string name : {"ammann_beenker", "golden_octagonal", "cubic_gap", "canonical_k3n1"}) {
    CAPTURE(name);
    auto s = builtin(name).sys;
    double delta = static_cast<double>(s.k - s.n) / s.n;
    std::vector<long> Rl{2, 3, 5, 8};
    auto rep = scan(s, Rl);
    for (size_t i = 1; i < rep.samples.size(); ++i) CHECK(rep.samples[i].c_lower <= rep.samples[i - 1].c_lower);
    for (auto& smp : rep.samples) {
      CHECK(smp.c_lower <= smp.c_upper);
      // Exact re-evaluation of the minimizer.
      auto y = s.project(smp.argmin);
      double nm = 0;
      for (auto& x : y) {
        auto e = to_float(x, 120);
        nm = std::max(nm, std::max(std::abs(e.lo), std::abs(e.hi)));
      }
      double exact = nm * std::pow(static_cast<double>(linf(smp.argmin)), delta);
      CHECK(exact >= smp.c_lower);
      CHECK(exact == doctest::Approx(smp.c_upper).epsilon(1e-9));
      double oracle = brute_min(s, smp.R, delta);
      CHECK(smp.c_lower == doctest::Approx(oracle).epsilon(1e-9));
    }
  }
}

TEST_CASE("Ammann-Beenker scan is flat") {
  auto s = builtin("ammann_beenker").sys;
  auto rep = scan(s, {10, 20, 30});
  CHECK(rep.samples[2].c_lower >= 0.05);
  CHECK(rep.samples[2].c_lower * 2 >= rep.samples[0].c_lower);
  CHECK(rep.verdict == DVerdict::LIKELY_D);
  // Dirichlet-type upper bound stays bounded.
  for (auto& smp : rep.samples) CHECK(smp.c_upper <= rep.samples[0].c_upper * 4);
}

TEST_CASE("Liouville stress input") {
  auto s = builtin("liouville_stress").sys;
  auto rep = scan(s, {10, 100, 1000, 10000, 100000, 1000000});
  CHECK(rep.samples.back().c_lower <= 1e-10);
  CHECK(rep.verdict == DVerdict::LIKELY_NOT_D);
  CHECK_FALSE(certify_codim1(s).has_value());
}

TEST_CASE("enumeration guard") {
  auto s = builtin("high_complexity").sys;
  CHECK_THROWS_AS(scan(s, {100000}), std::length_error);
}

TEST_CASE("finite index stability") {
  auto s = builtin("ammann_beenker").sys;
  auto s2 = s;
  for (auto& row : s2.proj)
    for (auto& x : row) x = x.mul_int(2);
  std::vector<long> Rl{5, 10, 20};
  auto a = scan(s, Rl), b = scan(s2, Rl);
  CHECK(a.verdict == b.verdict);
  // Scaling the lattice by N = 2 scales every value by N; allowed band N^{1+delta}.
  for (size_t i = 0; i < Rl.size(); ++i) {
    double ratio = b.samples[i].c_lower / a.samples[i].c_lower;
    CHECK(ratio <= 4.0 + 1e-9);
    CHECK(ratio >= 0.25 - 1e-9);
  }
}

TEST_CASE("certification") {
  auto fib = builtin("fibonacci").sys;
  auto c = certify_codim1(fib);
  REQUIRE(c.has_value());
  CHECK(c->period == std::vector<Int>{1});
  CHECK_FALSE(certify_codim1(builtin("canonical_k3n1").sys).has_value());
  auto f2 = sqrt2();
  auto cs = certify_codim1(slope_system(f2, FE::theta(f2)));
  REQUIRE(cs.has_value());
  CHECK(cs->bound == 2);
  CHECK(certify(builtin("ammann_beenker").sys).has_value());
  CHECK_FALSE(certify(builtin("cubical_demo").sys).has_value());

  auto k3 = builtin("canonical_k3n1").sys;
  CHECK(certify_norm(k3).has_value());
  CHECK(scan(k3, {4, 8, 16, 32}).verdict == DVerdict::LIKELY_D);
  CHECK(certify_norm(builtin("ammann_beenker").sys).has_value());
  CHECK_FALSE(certify_norm(builtin("liouville_stress").sys).has_value());
  CHECK_FALSE(certify_norm(builtin("cubic_gap").sys).has_value());
  auto k3d = scheme_D(k3, 32);
  CHECK(k3d.verdict == DVerdict::CERTIFIED_D);
  CHECK_FALSE(k3d.parts[0].certificate.has_value());
}

TEST_CASE("scheme level verdicts") {
  auto sq = scheme_D(builtin("square_product").sys, 1000);
  REQUIRE(sq.parts.size() == 2);
  for (auto& p : sq.parts) {
    CHECK(p.verdict == DVerdict::CERTIFIED_D);
    CHECK(p.certificate.has_value());
    CHECK(p.delta == Rat(1));
  }
  CHECK(sq.verdict == DVerdict::CERTIFIED_D);
  // Whole-lattice scan of the product is flat as well.
  auto whole = scan(builtin("square_product").sys, {4, 8, 16});
  CHECK(whole.verdict == DVerdict::LIKELY_D);

  auto ab = scheme_D(builtin("ammann_beenker").sys, 20);
  CHECK(ab.parts.size() == 1);
  CHECK(ab.verdict == DVerdict::CERTIFIED_D);
  auto lv = scheme_D(builtin("liouville_stress").sys, 1000000);
  CHECK(lv.verdict == DVerdict::LIKELY_NOT_D);
  for (auto& p : lv.parts) CHECK_FALSE(p.certificate.has_value());
}

TEST_CASE("transference on Fibonacci") {
  auto s = builtin("fibonacci").sys;
  auto series = transference_check(s, {10, 30, 100, 300, 1000}, 2001);
  std::vector<std::pair<double, double>> pts;
  for (auto& [R, c] : series) pts.push_back({static_cast<double>(R), c});
  CHECK(loglog_slope(pts) == doctest::Approx(-1.0).epsilon(0.15));
  // A single grid point at the origin is covered by gamma = 0.
  auto one = transference_check(s, {10}, 1);
  CHECK(one[0].second == 0.0);
}

TEST_CASE("inhomogeneous codim-1 series") {
  auto s = builtin("fibonacci").sys;
  auto f = s.field;
  std::vector<long> Rl{10, 100, 1000, 10000};
  auto zero = inhomogeneous_codim1(s, FE(f, Rat(0)), Rl);
  auto hom = scan(s, Rl);
  for (size_t i = 0; i < Rl.size(); ++i) CHECK(zero[i].c_lower == hom.samples[i].c_lower);
  auto third = inhomogeneous_codim1(s, FE::theta(f).scaled(Rat(1, 3)), Rl);
  // Oracle over q with p free.
  long double a = (std::sqrt(5.0L) - 1) / 2, b = (1 + std::sqrt(5.0L)) / 6;
  long double best = 1e9;
  for (long q = -10000; q <= 10000; ++q)
    for (long p : {static_cast<long>(std::floor(-q * a - b)), static_cast<long>(std::ceil(-q * a - b))}) {
      long eta = std::max(std::abs(p), std::abs(q));
      if (eta == 0 || eta > 10000) continue;
      best = std::min(best, std::fabs(p + q * a + b) * eta);
    }
  CHECK(third.back().c_lower == doctest::Approx(static_cast<double>(best)).epsilon(1e-6));
  CHECK(third.back().c_lower > 0.01);
  auto half = inhomogeneous_codim1(s, FE(f, Rat(1, 2)), Rl);
  for (size_t i = 1; i < half.size(); ++i) CHECK(half[i].c_lower <= half[i - 1].c_lower);
}
