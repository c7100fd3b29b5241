#pragma once

#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "cutproj/exactnum.hpp"
#include "cutproj/linalg.hpp"

namespace cutproj {

// Fixed-precision text for reports (%.<prec>g).
inline std::string fmt_double(double x, int prec = 6) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", prec, x);
  return buf;
}

// Calls fn on every size-r subset of {0..m-1}, in lexicographic order.
inline void for_each_subset(int m, int r, const std::function<void(const std::vector<int>&)>& fn) {
  if (r < 0 || r > m) return;
  std::vector<int> idx(r);
  for (int i = 0; i < r; ++i) idx[i] = i;
  while (true) {
    fn(idx);
    int i = r - 1;
    while (i >= 0 && idx[i] == m - r + i) --i;
    if (i < 0) return;
    ++idx[i];
    for (int j = i + 1; j < r; ++j) idx[j] = idx[j - 1] + 1;
  }
}

inline FieldVec vec_add(const FieldVec& a, const FieldVec& b) {
  FieldVec r = a;
  for (size_t i = 0; i < r.size(); ++i) r[i] += b[i];
  return r;
}

inline FieldVec vec_sub(const FieldVec& a, const FieldVec& b) {
  FieldVec r = a;
  for (size_t i = 0; i < r.size(); ++i) r[i] -= b[i];
  return r;
}

inline std::string vec_key(const FieldVec& v) {
  std::string s;
  for (auto& x : v) {
    s += x.key();
    s += '|';
  }
  return s;
}

// Affine dimension of a point set (-1 when empty).
inline int affine_rank(const std::vector<FieldVec>& pts) {
  if (pts.empty()) return -1;
  FieldMat diffs;
  for (size_t i = 1; i < pts.size(); ++i) diffs.push_back(vec_sub(pts[i], pts[0]));
  if (diffs.empty()) return 0;
  return rank(diffs);
}

}  // namespace cutproj
