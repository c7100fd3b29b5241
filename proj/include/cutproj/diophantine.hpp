#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cutproj/exactnum.hpp"
#include "cutproj/scheme.hpp"

namespace cutproj {

// Ordered from strongest evidence for D to strongest against.
enum class DVerdict { CERTIFIED_D, LIKELY_D, INCONCLUSIVE, LIKELY_NOT_D };
std::string dverdict_name(DVerdict v);

struct CFCertificate {
  FE value;
  std::vector<Int> preperiod;  // a_0 first
  std::vector<Int> period;
  Int bound;                   // max partial quotient after a_0
  std::string str() const;
};

// Exact eventually periodic expansion of a quadratic irrational.
// Throws std::domain_error("RATIONAL_INPUT...") or ("NOT_QUADRATIC...").
CFCertificate cf_expand(const FE& x);
// Rebuilds the value from the certificate exactly, inside x's field.
FE cf_value(const FieldPtr& field, const CFCertificate& c);

struct DioSample {
  long R = 0;
  double c_lower = 0;  // certified lower bound of min |gamma_<|_inf eta^delta over 0 < eta <= R
  double c_upper = 0;  // value at the minimizer (upper enclosure)
  std::vector<long> argmin;
};

struct ScanOptions {
  double plateau_factor = 2.0;
  double slope_threshold = -0.25;
  double residual_tol = 0.1;
  double guard = 1e8;  // maximal number of free-coordinate vectors
};

struct DioReport {
  int subsystem = 0;
  Rat delta;
  std::vector<DioSample> samples;
  DVerdict verdict = DVerdict::INCONCLUSIVE;
  std::optional<CFCertificate> certificate;
  std::string note;
};

// Least-squares slope of log y against log x; residual is the RMS residual relative to the spread of log y.
double loglog_slope(const std::vector<std::pair<double, double>>& pts, double* residual = nullptr);
DVerdict scan_verdict(const std::vector<DioSample>& samples, const ScanOptions& opt = {});

// Throws std::length_error("ENUMERATION_TOO_LARGE...") when the free box exceeds opt.guard.
DioReport scan(const InternalSystem& sub, const std::vector<long>& R_list, const ScanOptions& opt = {});
// Geometric R list sized for the free dimension k - n.
std::vector<long> default_R_list(const InternalSystem& sub, long r_max = 0);

// Quadratic reduction: field of degree 2 and k = 2n. The certificate is the expansion of the generator.
std::optional<CFCertificate> certify(const InternalSystem& sub);
std::optional<CFCertificate> certify_codim1(const InternalSystem& sub);
// Field of degree D with k = D n and an injective rational split: every coordinate of gamma_< is a
// field element with conjugates O(eta), so its norm gives |gamma_<| >= c eta^-(D-1). Returns the reason.
std::optional<std::string> certify_norm(const InternalSystem& sub);

struct SchemeDReport {
  DVerdict verdict = DVerdict::INCONCLUSIVE;
  std::vector<DioReport> parts;
  std::vector<std::string> warnings;
};
// r_max = 0 picks default_R_list per factor.
SchemeDReport scheme_D(const InternalSystem& s, long r_max = 0, const ScanOptions& opt = {});

// (R, covering radius of W - W by {gamma_< : eta <= R}) in the sup norm; n <= 2.
std::vector<std::pair<long, double>> transference_check(const InternalSystem& sub, const std::vector<long>& R_list,
                                                        int grid = 41);

// min |gamma_< + beta| eta^d over 0 < eta <= R, for n = 1.
std::vector<DioSample> inhomogeneous_codim1(const InternalSystem& sub, const FE& beta, const std::vector<long>& R_list);

}  // namespace cutproj
