#pragma once

#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "cutproj/decompose.hpp"
#include "cutproj/exactnum.hpp"
#include "cutproj/scheme.hpp"

namespace cutproj {

// Exact vertices of {x : <normal, x> <= offset}; throws ValidationFailure when unbounded or empty.
std::vector<FieldVec> polytope_vertices(FieldPtr field, int n, const std::vector<HalfSpace>& hs);
// Exact n-volume (n <= 2) of the window.
FE window_measure(const InternalSystem& s);

// Same lattice with gamma_< replaced by gamma_< / N.
InternalSystem scaled_lattice(const InternalSystem& s, const Int& N);

// Distinct translates H + gamma_< (eta(gamma) <= r) of the hyperplanes of one class that cross
// the interior of W, stored compactly and sorted by position along the class normal.
class CutOffsets {
 public:
  CutOffsets(const InternalSystem& s, int cls, long r);
  size_t size() const { return h_.size(); }
  int halfspace(size_t i) const { return h_[i]; }
  std::vector<long> gamma(size_t i) const;
  double approx(size_t i) const { return x_[i]; }
  // Exact value of <class normal, x> on the translate.
  FE value(size_t i) const;
  int cls() const { return cls_; }

 private:
  const InternalSystem* s_;
  int cls_, k_;
  std::vector<int> h_;
  std::vector<long> g_;
  std::vector<double> x_;
};

struct Cell {
  std::vector<FieldVec> vertices;  // n = 1: {lo, hi}; n = 2: counter-clockwise polygon
  FieldVec interior;
  FE measure;
  std::vector<int> slab;  // per class: number of cut offsets below the cell
};

struct CellComplex {
  int n = 0;
  long r = 0;
  Int N = 1;
  std::vector<Cell> cells;
  std::vector<FieldVec> normals;               // class normals
  std::vector<std::vector<FE>> offsets;        // sorted cut positions per class
  std::vector<std::vector<std::pair<int, std::vector<long>>>> translates;  // (halfspace, gamma) per offset
};

// Throws std::invalid_argument("DIMENSION_UNSUPPORTED...") for n >= 3.
void for_each_cell(const InternalSystem& s, long r, const std::function<void(const Cell&)>& visit, const Int& N = 1);
CellComplex cut_regions(const InternalSystem& s, long r, const Int& N = 1);

struct CellStats {
  size_t count = 0;
  FE total;                   // exact sum of measures
  double min_inradius = 0;    // certified lower bound
  double max_inradius = 0;
};
CellStats cell_stats(const InternalSystem& s, long r, const Int& N = 1);

// Chebyshev (Euclidean) inradius of a cell, as a lower bound.
double cell_inradius(const Cell& c);
double min_inradius(const CellComplex& c);

// Exact minimal cell length for n = 1 without materializing cells; suited to large r.
struct GapResult {
  FE length;
  double lo = 0, hi = 0;
  size_t cells = 0;
};
GapResult min_cell_length_1d(const InternalSystem& s, long r);

// Slab position of x for every class (exact); nullopt if x lies on a cut.
std::optional<std::vector<int>> locate_slabs(const CellComplex& cx, const FieldVec& x);
// Every cell of fine lies inside a cell of coarse.
bool refines(const CellComplex& fine, const CellComplex& coarse);

// Offsets gamma with eta(gamma) <= r whose projection may meet W - W (superset; includes 0).
std::vector<std::vector<long>> difference_offsets(const InternalSystem& s, long r);

struct AcceptanceDomain {
  std::vector<std::vector<long>> members;  // sorted offsets gamma with x + gamma_< in W
  std::vector<int> cells;
  FE volume;
  FE frequency;
};
// Signature of a point x in W: the offsets in `offs` with x + gamma_< in W.
std::vector<int> point_signature(const InternalSystem& s, const std::vector<std::vector<long>>& offs, const FieldVec& x);
std::vector<AcceptanceDomain> acceptance_domains(const InternalSystem& s, long r);
std::vector<AcceptanceDomain> acceptance_domains(const InternalSystem& s, const CellComplex& cx);
// Signatures over an explicit offset list; every offset must satisfy eta <= cx.r.
std::vector<AcceptanceDomain> acceptance_domains(const InternalSystem& s, const CellComplex& cx,
                                                 const std::vector<std::vector<long>>& offs);

struct ProductCheck {
  bool cells_ok = false;
  bool domains_ok = false;
  long lambda = 1;  // factor radius used for radius r of the whole scheme
  bool ok() const { return cells_ok && domains_ok; }
};
// Factors with n_i = 1 and n = 2 (sums of factor cells are parallelograms).
ProductCheck product_refinement_check(const InternalSystem& s, const Decomposition& dec, long r);

// SVG of the cells (n = 2) or intervals (n = 1); cells coloured by domain when given.
void write_cells_svg(std::ostream& os, const CellComplex& cx, const std::vector<AcceptanceDomain>* domains = nullptr);

}  // namespace cutproj
