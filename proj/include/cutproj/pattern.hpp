#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "cutproj/geometry.hpp"
#include "cutproj/scheme.hpp"

namespace cutproj {

struct PatternPoint {
  std::vector<long> gamma;
  std::vector<double> y;  // physical position
  FieldVec star;          // gamma_< + shift, inside W
};

struct PointSet {
  InternalSystem sys;
  FieldMat phys;  // gamma -> physical position
  FieldVec shift;
  long eta_max = 0;
  std::vector<PatternPoint> points;  // sorted by gamma
};

// All gamma with |gamma|_inf <= eta_max and gamma_< + shift in the interior of W, for a nonsingular
// shift drawn from seed. Throws std::runtime_error("SINGULAR_HIT...") if no shift is found.
PointSet generate(const Scheme& s, long eta_max, std::uint64_t seed);
// Same with an explicit shift; throws std::invalid_argument("SINGULAR_HIT...") if it is singular.
PointSet generate_with_shift(const Scheme& s, long eta_max, const FieldVec& shift);

// physical: r-patches are Euclidean balls of radius r in physical space (the default).
// lattice: r-patches collect the offsets with |delta|_inf <= r.
enum class PatchMetric { physical, lattice };
PatchMetric patch_metric_from_name(const std::string& name);

// Candidate offsets of an r-patch: delta within radius r whose delta_< may lie in W - W. Sorted, contains 0.
std::vector<std::vector<long>> patch_offsets(const InternalSystem& s, const FieldMat& phys, long r, PatchMetric m);

struct PatchClass {
  std::vector<std::vector<long>> members;  // sorted offsets present in the patch
  std::vector<int> centers;                // indices into PointSet::points
};

struct Census {
  long r = 0;
  PatchMetric metric = PatchMetric::physical;
  long reach = 0;  // largest |delta|_inf among candidate offsets
  size_t centers = 0;
  std::vector<PatchClass> classes;
  size_t p_hat() const { return classes.size(); }
};

// Centers are points whose whole patch lies in the enumeration box.
// Throws std::range_error("WINDOW_TOO_SMALL...") if there are none.
Census patch_census(const PointSet& ps, long r, PatchMetric m = PatchMetric::physical);

struct Repetitivity {
  long r = 0;
  double rho_hat = 0;  // lower estimate of rho(r); Euclidean for physical patches, sup norm on gamma otherwise
  size_t probes = 0;
};
// For each probe center (half the census box) and each class, the distance to the nearest other
// occurrence; rho_hat is the largest of these.
Repetitivity repetitivity(const PointSet& ps, long r, PatchMetric m = PatchMetric::physical);
Repetitivity repetitivity(const PointSet& ps, const Census& c);

// Acceptance domains of r-patches, computed on the cut regions of radius cut_radius (n <= 2).
struct PatchDomains {
  long cut_radius = 0;
  std::vector<AcceptanceDomain> domains;
};
PatchDomains patch_domains(const InternalSystem& s, const FieldMat& phys, long r, PatchMetric m = PatchMetric::physical);

struct FrequencyRow {
  std::vector<std::vector<long>> members;
  double empirical = 0;
  double exact = 0;  // |A_P| / |W|
};
struct FrequencyTable {
  std::vector<FrequencyRow> rows;
  double max_deviation = 0;
  double empirical_sum = 0;
};
FrequencyTable frequency_check(const PointSet& ps, long r, PatchMetric m = PatchMetric::physical);

void write_points_csv(std::ostream& os, const PointSet& ps);
// Scatter plot for physical dimension 1 or 2.
void write_points_svg(std::ostream& os, const PointSet& ps);

}  // namespace cutproj
