#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cutproj/complexity.hpp"
#include "cutproj/decompose.hpp"
#include "cutproj/diophantine.hpp"
#include "cutproj/scheme.hpp"

namespace cutproj {

enum class LRVerdict { LR, LR_LIKELY, INCONCLUSIVE, NOT_LR_LIKELY, NOT_LR, OUT_OF_THEOREM_SCOPE };
std::string lr_verdict_name(LRVerdict v);

struct ClassifyOptions {
  long scan_rmax = 0;  // 0: default R list per factor
  ScanOptions scan;
};

struct LRReport {
  std::string name;
  int k = 0, d = 0, n = 0;
  bool weakly_homogeneous = false;
  long homogeneity_N = 0;
  ComplexityReport complexity;
  std::optional<Decomposition> decomposition;
  std::optional<SchemeDReport> property_D;  // absent when C fails
  LRVerdict verdict = LRVerdict::INCONCLUSIVE;
  std::string evidence;                     // "exact", "certified" or "scan"
  std::vector<std::string> notes;
  std::optional<std::string> error;         // set when a stage threw; later stages are missing
};

LRReport classify(const Scheme& s, const ClassifyOptions& opt = {});

struct LineGroup {
  int index = 0;        // basis vector e_i
  Subgroup group;       // {gamma : gamma_< in <(e_i)_<>}
  int rank = 0;
  DioReport scan;       // as a rank-r lattice on the line
};

struct CanonicalReport {
  std::vector<LineGroup> lines;
  bool ranks_equal_k_over_n = false;
  int certified = 0, likely = 0, likely_not = 0;  // Diophantine line groups by tier
  LRVerdict verdict = LRVerdict::INCONCLUSIVE;
};

// Throws std::invalid_argument("NOT_CANONICAL...") when W is not the projected unit cube, and
// ("DEGENERATE...") when some n projected basis vectors are dependent.
CanonicalReport canonical_shortcut(const Scheme& s, const ClassifyOptions& opt = {});

std::string format_report(const LRReport& r);
std::string format_report(const CanonicalReport& r);

}  // namespace cutproj
