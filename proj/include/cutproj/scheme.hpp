#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "cutproj/exactnum.hpp"
#include "cutproj/intlat.hpp"

namespace cutproj {

// {x : <normal, x> <= offset}
struct HalfSpace {
  FieldVec normal;
  FE offset;
};

enum class ValidationCode {
  MALFORMED,
  PERIODIC,
  NOT_DENSE,
  PHYSICAL_NOT_INJECTIVE,
  UNBOUNDED_WINDOW,
  REDUNDANT_HALFSPACE,
  DEGENERATE_WINDOW,
};

std::string code_name(ValidationCode c);

class ValidationFailure : public std::runtime_error {
 public:
  ValidationFailure(ValidationCode code, const std::string& msg, int index = -1);
  ValidationCode code() const { return code_; }
  int index() const { return index_; }

 private:
  ValidationCode code_;
  int index_;
};

// Internal-space data: lattice Z^k, map gamma -> gamma_< (n x k) and a polytope window.
// Shared by whole schemes and by the subsystems of a decomposition.
struct InternalSystem {
  FieldPtr field;
  int k = 0;
  int n = 0;
  FieldMat proj;
  std::vector<HalfSpace> halfspaces;

  // Parallel classes of supporting hyperplanes (the set of subspaces V(H)).
  std::vector<std::vector<int>> classes;
  std::vector<int> class_of;
  std::vector<FieldVec> class_normal;
  // hw[h][j] = <normal_h, (e_j)_<>, cw[c][j] = <class_normal_c, (e_j)_<>.
  FieldMat hw;
  FieldMat cw;
  std::vector<FieldVec> vertices;

  int d() const { return k - n; }
  int num_classes() const { return static_cast<int>(classes.size()); }
  FieldVec project(const std::vector<long>& g) const;
  bool in_window(const FieldVec& x) const;
  bool in_interior(const FieldVec& x) const;
};

// Builds classes and vertices, and checks that the window is bounded, full-dimensional
// and irredundant. Throws ValidationFailure.
InternalSystem make_internal(FieldPtr field, int k, int n, FieldMat proj, std::vector<HalfSpace> hs);

// Vertices of a validated polytope {x : <normal, x> <= offset}; throws like make_internal.
std::vector<FieldVec> window_vertices(FieldPtr field, int n, const std::vector<HalfSpace>& hs);

struct SchemeSpec {
  std::string name;
  FieldPtr field;
  int k = 0, d = 0, n = 0;
  FieldMat proj_internal;
  FieldMat proj_physical;
  std::vector<HalfSpace> halfspaces;
  std::optional<FieldVec> window_shift;
};

struct Scheme {
  SchemeSpec spec;
  InternalSystem sys;
  const std::string& name() const { return spec.name; }
};

Scheme validate(const SchemeSpec& spec);

struct WeakHomogeneity {
  bool yes = false;
  FieldVec origin;  // witness o
  long N = 0;       // least N with o in H + (1/N) Gamma_< for every H
};
WeakHomogeneity weakly_homogeneous(const InternalSystem& s);

enum class Tri { yes, no, unknown };
std::string tri_name(Tri t);
struct Homogeneity {
  Tri result = Tri::unknown;
  FieldVec origin;
  long N = 0;
};
// Exact: decides existence of an origin with denominator 1.
Homogeneity homogeneous(const InternalSystem& s);

// True when no point gamma_< + shift ever lies on a supporting hyperplane of W.
bool is_nonsingular_shift(const InternalSystem& s, const FieldVec& shift);
FieldVec choose_nonsingular_shift(const InternalSystem& s, std::uint64_t seed);

}  // namespace cutproj
