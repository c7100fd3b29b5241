#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cutproj/exactnum.hpp"

namespace cutproj {

using IntVec = std::vector<Int>;
using IntMat = std::vector<IntVec>;

// Row-style Hermite normal form: pivots positive, entries above a pivot in [0, pivot).
// Zero rows are dropped.
IntMat hnf(const IntMat& m);

// Subgroup of Z^k given by generators, with canonical HNF basis.
class Subgroup {
 public:
  Subgroup() = default;
  Subgroup(int ambient_rank, IntMat generators);
  static Subgroup full(int k);
  static Subgroup zero(int k);

  int ambient_rank() const { return k_; }
  int rank() const { return static_cast<int>(basis_.size()); }
  const IntMat& generators() const { return gens_; }
  const IntMat& hnf_basis() const { return basis_; }
  bool contains(const IntVec& v) const;
  std::string str() const;

  friend bool operator==(const Subgroup& a, const Subgroup& b) {
    return a.k_ == b.k_ && a.basis_ == b.basis_;
  }

 private:
  int k_ = 0;
  IntMat gens_;
  IntMat basis_;
};

// Integer vectors annihilated by an integer matrix; the result is saturated.
Subgroup integer_kernel(const IntMat& a, int k);
// {g in Z^k : M g = 0} for a field-valued matrix with k columns.
Subgroup integer_kernel(const FieldMat& m, int k);
// Same for a rational matrix.
Subgroup integer_kernel(const RatMat& m, int k);

Subgroup subgroup_sum(const std::vector<Subgroup>& parts);
// |det| of the basis when of full rank; nullopt stands for an infinite index.
std::optional<Int> index_in_ambient(const Subgroup& s);
Subgroup saturation(const Subgroup& s);
Subgroup intersection(const Subgroup& a, const Subgroup& b);

// Scale rational rows to primitive integer rows.
IntMat clear_denominators(const RatMat& m);
// Integer coordinates of v in the HNF basis of s, if v is in s.
std::optional<IntVec> coordinates_in(const Subgroup& s, const IntVec& v);
std::string index_str(const std::optional<Int>& idx);

}  // namespace cutproj
