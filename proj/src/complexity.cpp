#include "cutproj/complexity.hpp"

#include <algorithm>

#include "cutproj/linalg.hpp"
#include "cutproj/util.hpp"

namespace cutproj {

Subgroup stabiliser(const InternalSystem& s, const std::vector<int>& classes) {
  if (classes.empty()) return Subgroup::full(s.k);
  FieldMat rows;
  for (int c : classes) rows.push_back(s.cw[c]);
  return integer_kernel(rows, s.k);
}

int beta(const InternalSystem& s, const Subgroup& g) {
  FieldMat imgs;
  for (const auto& b : g.hnf_basis()) {
    std::vector<long> v;
    for (auto& x : b) v.push_back(x.get_si());
    imgs.push_back(s.project(v));
  }
  if (imgs.empty()) return 0;
  return rank(imgs);
}

int beta(const InternalSystem& s, int cls) { return beta(s, stabiliser(s, {cls})); }

bool is_flag(const InternalSystem& s, const std::vector<int>& classes) {
  if (static_cast<int>(classes.size()) != s.n) return false;
  FieldMat a;
  for (int c : classes) a.push_back(s.class_normal[c]);
  return rank(a) == s.n;
}

std::vector<std::vector<int>> all_flags(const InternalSystem& s) {
  std::vector<std::vector<int>> out;
  for_each_subset(s.num_classes(), s.n, [&](const std::vector<int>& sub) {
    if (is_flag(s, sub)) out.push_back(sub);
  });
  return out;
}

std::vector<Subgroup> line_subgroups(const InternalSystem& s, const std::vector<int>& flag) {
  std::vector<Subgroup> out;
  for (size_t i = 0; i < flag.size(); ++i) {
    std::vector<int> rest;
    for (size_t j = 0; j < flag.size(); ++j)
      if (j != i) rest.push_back(flag[j]);
    out.push_back(stabiliser(s, rest));
  }
  return out;
}

ComplexityReport complexity_report(const InternalSystem& s) {
  ComplexityReport r;
  int d = s.d();
  for (int c = 0; c < s.num_classes(); ++c) {
    StabiliserInfo info;
    info.cls = c;
    info.subgroup = stabiliser(s, {c});
    info.rank = info.subgroup.rank();
    info.beta = beta(s, info.subgroup);
    if (info.beta > s.n - 1) r.errors.push_back("beta exceeds n-1 on class " + std::to_string(c));
    if (info.beta > info.rank) r.errors.push_back("beta exceeds rank on class " + std::to_string(c));
    r.per_class.push_back(std::move(info));
  }
  auto flags = all_flags(s);
  if (flags.empty()) {
    r.errors.push_back("NO_FLAG");
    return r;
  }
  r.alpha = 0;
  for (auto& f : flags) {
    FlagInfo fi;
    fi.classes = f;
    for (int c : f) fi.alpha += d - r.per_class[c].rank + r.per_class[c].beta;
    r.alpha = std::max(r.alpha, fi.alpha);
    r.flags.push_back(fi);
  }
  r.property_C = r.alpha == d;
  r.hyperplane_spanning = std::all_of(r.per_class.begin(), r.per_class.end(),
                                      [&](const StabiliserInfo& i) { return i.beta == s.n - 1; });
  if (r.alpha < d) r.errors.push_back("alpha below d");
  if (r.property_C) {
    if (!r.hyperplane_spanning) r.errors.push_back("C holds but the scheme is not hyperplane spanning");
    for (auto& f : flags) {
      int sum = 0;
      for (int c : f) sum += r.per_class[c].rank;
      if (sum != (s.n - 1) * s.k) r.errors.push_back("flag rank sum differs from (n-1)k");
      if (!index_in_ambient(subgroup_sum(line_subgroups(s, f))))
        r.errors.push_back("line groups of a flag do not have finite index");
    }
  }
  return r;
}

RankInequality rank_inequality_check(const InternalSystem& s, const std::vector<int>& I, const std::vector<int>& J) {
  std::vector<int> uni = I, meet;
  for (int j : J)
    if (std::find(uni.begin(), uni.end(), j) == uni.end()) uni.push_back(j);
  for (int i : I)
    if (std::find(J.begin(), J.end(), i) != J.end()) meet.push_back(i);
  RankInequality r;
  Subgroup gi = stabiliser(s, I), gj = stabiliser(s, J), gm = stabiliser(s, meet);
  r.rk_union = stabiliser(s, uni).rank();
  r.rk_i = gi.rank();
  r.rk_j = gj.rank();
  r.rk_meet = gm.rank();
  r.holds = r.rk_union >= r.rk_i + r.rk_j - r.rk_meet;
  r.equality = subgroup_sum({gi, gj}).rank() == r.rk_meet;
  return r;
}

}  // namespace cutproj
