#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <map>
#include <set>
#include <sstream>

#include "cutproj/builtins.hpp"
#include "cutproj/geometry.hpp"
#include "cutproj/pattern.hpp"

using namespace cutproj;

namespace {

std::vector<std::vector<double>> total_matrix(const Scheme& s) {
  std::vector<std::vector<double>> t;
  for (auto& row : s.spec.proj_physical) {
    t.emplace_back();
    for (auto& x : row) t.back().push_back(x.approx());
  }
  for (auto& row : s.sys.proj) {
    t.emplace_back();
    for (auto& x : row) t.back().push_back(x.approx());
  }
  return t;
}

// Determinant and inverse by Gauss-Jordan with partial pivoting.
double invert(std::vector<std::vector<double>> a, std::vector<std::vector<double>>& inv) {
  size_t n = a.size();
  inv.assign(n, std::vector<double>(n, 0));
  for (size_t i = 0; i < n; ++i) inv[i][i] = 1;
  double det = 1;
  for (size_t c = 0; c < n; ++c) {
    size_t p = c;
    for (size_t r = c + 1; r < n; ++r)
      if (std::abs(a[r][c]) > std::abs(a[p][c])) p = r;
    if (p != c) {
      std::swap(a[p], a[c]);
      std::swap(inv[p], inv[c]);
      det = -det;
    }
    double v = a[c][c];
    det *= v;
    for (size_t j = 0; j < n; ++j) {
      a[c][j] /= v;
      inv[c][j] /= v;
    }
    for (size_t r = 0; r < n; ++r)
      if (r != c) {
        double f = a[r][c];
        for (size_t j = 0; j < n; ++j) {
          a[r][j] -= f * a[c][j];
          inv[r][j] -= f * inv[c][j];
        }
      }
  }
  return det;
}

std::string fibonacci_word(size_t len) {
  std::string w = "L";
  while (w.size() < len) {
    std::string nx;
    for (char c : w) nx += c == 'L' ? "LS" : "L";
    w = nx;
  }
  return w;
}

}  // namespace

TEST_CASE("Fibonacci points form a Fibonacci word") {
  auto s = builtin("fibonacci");
  auto ps = generate(s, 50, 7);
  REQUIRE(ps.points.size() > 20);
  std::vector<double> y;
  for (auto& p : ps.points) y.push_back(p.y[0]);
  std::sort(y.begin(), y.end());
  // Keep the run where the enumeration is complete: |y| small relative to eta_max.
  std::vector<double> gaps;
  for (size_t i = 1; i < y.size(); ++i)
    if (std::abs(y[i]) < 40 && std::abs(y[i - 1]) < 40) gaps.push_back(y[i] - y[i - 1]);
  REQUIRE(gaps.size() > 20);
  double lo = *std::min_element(gaps.begin(), gaps.end()), hi = *std::max_element(gaps.begin(), gaps.end());
  CHECK(hi / lo == doctest::Approx((1 + std::sqrt(5.0)) / 2));
  std::string word;
  for (double g : gaps) {
    bool shrt = std::abs(g - lo) < 1e-9;
    CHECK((shrt || std::abs(g - hi) < 1e-9));
    word += shrt ? 'S' : 'L';
  }
  CHECK(word.find("SS") == std::string::npos);
  CHECK(fibonacci_word(20000).find(word) != std::string::npos);
}

TEST_CASE("generated points against brute-force enumeration") {
  for (std::string name : {"fibonacci", "cubic_gap", "fibonacci_third"}) {
    CAPTURE(name);
    auto s = builtin(name);
    auto ps = generate(s, 40, 3);
    CHECK(is_nonsingular_shift(s.sys, ps.shift));
    std::set<std::vector<long>> want;
    for (long a = -40; a <= 40; ++a)
      for (long b = -40; b <= 40; ++b) {
        auto x = s.sys.project({a, b});
        for (int r = 0; r < s.sys.n; ++r) x[r] += ps.shift[r];
        if (s.sys.in_window(x)) want.insert({a, b});
      }
    std::set<std::vector<long>> got;
    for (auto& p : ps.points) {
      got.insert(p.gamma);
      CHECK(s.sys.in_interior(p.star));
    }
    CHECK(got == want);
  }
  auto a = generate(builtin("ammann_beenker"), 6, 11), b = generate(builtin("ammann_beenker"), 6, 11);
  REQUIRE(a.points.size() == b.points.size());
  for (size_t i = 0; i < a.points.size(); ++i) CHECK(a.points[i].gamma == b.points[i].gamma);
  CHECK(generate(builtin("fibonacci"), 0, 1).points.size() <= 1);
}

TEST_CASE("Ammann-Beenker point count matches the density") {
  auto s = builtin("ammann_beenker");
  long eta = 20;
  auto ps = generate(s, eta, 5);
  std::vector<std::vector<double>> inv;
  double det = std::abs(invert(total_matrix(s), inv));
  double density = window_measure(s.sys).approx() / det;
  // Physical box half-width L such that every point with |y|_inf <= L has eta <= eta_max.
  double xmax = 0;
  for (auto& v : s.sys.vertices)
    for (auto& c : v) xmax = std::max(xmax, std::abs(c.approx()));
  for (auto& c : ps.shift) xmax += std::abs(c.approx());
  double L = 1e300;
  for (auto& row : inv) {
    double py = std::abs(row[0]) + std::abs(row[1]), px = std::abs(row[2]) + std::abs(row[3]);
    L = std::min(L, (eta - px * xmax) / py);
  }
  REQUIRE(L > 5);
  size_t count = 0;
  for (auto& p : ps.points)
    if (std::abs(p.y[0]) <= L && std::abs(p.y[1]) <= L) ++count;
  double expect = density * 4 * L * L;
  CHECK(std::abs(count - expect) < 0.1 * expect);
}

TEST_CASE("patch census") {
  auto fib = builtin("fibonacci");
  auto ps = generate(fib, 400, 1);
  auto c0 = patch_census(ps, 0);
  CHECK(c0.p_hat() == 1);
  CHECK(c0.centers == ps.points.size());
  for (long r = 1; r <= 20; ++r) {
    CAPTURE(r);
    CHECK(patch_census(ps, r).p_hat() == patch_domains(fib.sys, ps.phys, r).domains.size());
    CHECK(patch_census(ps, r, PatchMetric::lattice).p_hat() == acceptance_domains(fib.sys, r).size());
  }
  auto c = patch_census(ps, 6);
  size_t total = 0;
  for (auto& pc : c.classes) {
    total += pc.centers.size();
    CHECK(std::binary_search(pc.members.begin(), pc.members.end(), std::vector<long>(2, 0)));
  }
  CHECK(total == c.centers);
  CHECK_THROWS_AS(patch_census(generate(fib, 2, 1), 50), std::range_error);
}

TEST_CASE("census agrees with a direct physical-ball count") {
  auto fib = builtin("fibonacci");
  auto ps = generate(fib, 300, 2);
  long r = 5;
  auto census = patch_census(ps, r);
  std::map<std::vector<std::vector<long>>, size_t> brute;
  for (auto& cls : census.classes)
    for (int i : cls.centers) {
      std::vector<std::vector<long>> members;
      for (auto& q : ps.points)
        if (std::abs(q.y[0] - ps.points[i].y[0]) <= r)
          members.push_back({q.gamma[0] - ps.points[i].gamma[0], q.gamma[1] - ps.points[i].gamma[1]});
      std::sort(members.begin(), members.end());
      ++brute[members];
    }
  REQUIRE(brute.size() == census.p_hat());
  for (auto& cls : census.classes) CHECK(brute[cls.members] == cls.centers.size());
}

TEST_CASE("AB census grows") {
  auto ps = generate(builtin("ammann_beenker"), 20, 1);
  size_t prev = 0;
  for (long r : {1L, 2L, 3L, 4L}) {
    auto p = patch_census(ps, r).p_hat();
    CHECK(p > prev);
    prev = p;
  }
}

TEST_CASE("patch frequencies") {
  auto fib = builtin("fibonacci");
  auto ft = frequency_check(generate(fib, 2000, 1), 5);
  CHECK(ft.max_deviation <= 0.01);
  CHECK(ft.empirical_sum == doctest::Approx(1));
  double exact = 0;
  for (auto& row : ft.rows) exact += row.exact;
  CHECK(exact == doctest::Approx(1));

  auto ab = frequency_check(generate(builtin("ammann_beenker"), 40, 1), 3);
  CHECK(ab.max_deviation <= 0.05);
}

TEST_CASE("repetitivity") {
  auto fib = builtin("fibonacci");
  auto ps = generate(fib, 2000, 1);
  CHECK(repetitivity(ps, 0).rho_hat == 0);
  for (long r : {5L, 10L, 20L, 50L}) {
    auto rep = repetitivity(ps, r);
    CAPTURE(r);
    CHECK(rep.probes > 100);
    CHECK(rep.rho_hat > 0);
    CHECK(rep.rho_hat / r <= 4);
  }
  auto liou = generate(builtin("liouville_stress"), 20000, 1);
  CHECK(repetitivity(liou, 100).rho_hat / 100 > 20);
}

TEST_CASE("point output") {
  auto ps = generate(builtin("ammann_beenker"), 4, 1);
  std::ostringstream csv, svg;
  write_points_csv(csv, ps);
  write_points_svg(svg, ps);
  std::string text = csv.str();
  CHECK(text.rfind("g0,g1,g2,g3,y0,y1,star0,star1\n", 0) == 0);
  CHECK(std::count(text.begin(), text.end(), '\n') == static_cast<long>(ps.points.size() + 1));
  CHECK(svg.str().find("<circle") != std::string::npos);
}
