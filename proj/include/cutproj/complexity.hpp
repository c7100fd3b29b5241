#pragma once

#include <string>
#include <vector>

#include "cutproj/intlat.hpp"
#include "cutproj/scheme.hpp"

namespace cutproj {

struct StabiliserInfo {
  int cls = 0;
  Subgroup subgroup;
  int rank = 0;
  int beta = 0;
};

struct FlagInfo {
  std::vector<int> classes;
  int alpha = 0;
};

struct ComplexityReport {
  std::vector<StabiliserInfo> per_class;
  std::vector<FlagInfo> flags;
  int alpha = 0;
  bool property_C = false;
  bool hyperplane_spanning = false;
  // Internal-consistency failures (should stay empty).
  std::vector<std::string> errors;
};

// Gamma^I: lattice vectors whose internal image lies in every V(H), H in I. I empty gives Z^k.
Subgroup stabiliser(const InternalSystem& s, const std::vector<int>& classes);
// dim of the real span of the internal image of g.
int beta(const InternalSystem& s, const Subgroup& g);
int beta(const InternalSystem& s, int cls);
// Field rank of the class normals equals n.
bool is_flag(const InternalSystem& s, const std::vector<int>& classes);
std::vector<std::vector<int>> all_flags(const InternalSystem& s);
ComplexityReport complexity_report(const InternalSystem& s);

struct RankInequality {
  bool holds = false;
  bool equality = false;
  int rk_union = 0, rk_i = 0, rk_j = 0, rk_meet = 0;
};
// rk(I u J) >= rk(I) + rk(J) - rk(I n J), with rk of a class set meaning rank of its stabiliser.
RankInequality rank_inequality_check(const InternalSystem& s, const std::vector<int>& I, const std::vector<int>& J);

// Line groups of a flag: stabiliser of the flag minus one class, for each class.
std::vector<Subgroup> line_subgroups(const InternalSystem& s, const std::vector<int>& flag);

}  // namespace cutproj
