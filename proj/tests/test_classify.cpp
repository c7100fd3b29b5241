#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <map>

#include "cutproj/builtins.hpp"
#include "cutproj/classify.hpp"

using namespace cutproj;

TEST_CASE("verdicts on the builtins") {
  std::map<std::string, LRVerdict> expected{
      {"ammann_beenker", LRVerdict::LR},        {"golden_octagonal", LRVerdict::LR},
      {"fibonacci", LRVerdict::LR},             {"fibonacci_third", LRVerdict::LR},
      {"square_product", LRVerdict::LR},        {"dodecagonal", LRVerdict::LR},
      {"canonical_k3n1", LRVerdict::LR},        {"liouville_stress", LRVerdict::NOT_LR_LIKELY},
      {"cubical_demo", LRVerdict::NOT_LR},      {"high_complexity", LRVerdict::NOT_LR},
      {"canonical_unequal", LRVerdict::NOT_LR}, {"cubic_gap", LRVerdict::OUT_OF_THEOREM_SCOPE},
  };
  for (auto& name : builtin_names()) {
    CAPTURE(name);
    auto r = classify(builtin(name));
    REQUIRE(expected.count(name));
    CHECK(r.verdict == expected[name]);
    CHECK_FALSE(r.error.has_value());
    // Invariants tying the verdict to the evidence.
    if (!r.complexity.property_C) CHECK(r.verdict == LRVerdict::NOT_LR);
    if (r.verdict == LRVerdict::LR || r.verdict == LRVerdict::LR_LIKELY) {
      CHECK(r.weakly_homogeneous);
      CHECK(r.complexity.property_C);
      REQUIRE(r.property_D.has_value());
      CHECK(r.property_D->verdict <= DVerdict::LIKELY_D);
    }
    if (r.verdict == LRVerdict::OUT_OF_THEOREM_SCOPE) CHECK_FALSE(r.weakly_homogeneous);
    CHECK(format_report(r).find("verdict: " + lr_verdict_name(r.verdict)) != std::string::npos);
  }
}

TEST_CASE("classify is deterministic") {
  auto s = builtin("cubic_gap");
  ClassifyOptions opt;
  opt.scan_rmax = 5000;
  auto a = classify(s, opt), b = classify(s, opt);
  CHECK(format_report(a) == format_report(b));
}

TEST_CASE("scan-only evidence gives the likely tier") {
  // Same Fibonacci lattice with the slope moved into Q(cbrt2), where no certificate applies.
  auto spec = builtin_spec("liouville_stress");
  auto f = spec.field;
  spec.proj_internal[0][1] = FE::theta(f) - FE(f, Rat(1));
  spec.halfspaces = canonical_window(f, spec.proj_internal, 1, 2);
  auto s = validate(spec);
  auto r = classify(s);
  CHECK(r.verdict == LRVerdict::LR_LIKELY);
  CHECK(r.evidence == "scan");
}

TEST_CASE("canonical shortcut") {
  for (std::string name : {"ammann_beenker", "golden_octagonal", "fibonacci", "canonical_k3n1"}) {
    CAPTURE(name);
    auto s = builtin(name);
    auto c = canonical_shortcut(s);
    CHECK(c.ranks_equal_k_over_n);
    for (auto& l : c.lines) CHECK(l.rank * s.sys.n == s.sys.k);
    CHECK(c.verdict == LRVerdict::LR);
    CHECK(c.verdict == classify(s).verdict);
  }
  auto ab = canonical_shortcut(builtin("ammann_beenker"));
  for (auto& l : ab.lines) CHECK(l.rank == 2);

  auto un = builtin("canonical_unequal");
  auto cu = canonical_shortcut(un);
  CHECK_FALSE(cu.ranks_equal_k_over_n);
  std::vector<int> ranks;
  for (auto& l : cu.lines) ranks.push_back(l.rank);
  CHECK(ranks == std::vector<int>{2, 1, 2, 1});
  CHECK(cu.verdict == LRVerdict::NOT_LR);
  CHECK(classify(un).verdict == LRVerdict::NOT_LR);

  auto lv = canonical_shortcut(builtin("liouville_stress"));
  CHECK(lv.verdict == LRVerdict::NOT_LR_LIKELY);

  CHECK_THROWS_WITH_AS(canonical_shortcut(builtin("cubical_demo")), doctest::Contains("NOT_CANONICAL"),
                       std::invalid_argument);
  CHECK_THROWS_WITH_AS(canonical_shortcut(builtin("square_product")), doctest::Contains("DEGENERATE"),
                       std::invalid_argument);
}
