#pragma once

// Dense Gaussian elimination over an exact field (Rat or FE).

#include <optional>
#include <vector>

#include "cutproj/exactnum.hpp"

namespace cutproj {

inline bool is_zero(const Rat& q) { return q == 0; }
inline bool is_zero(const FE& a) { return a.is_zero(); }

template <class T>
using Mat = std::vector<std::vector<T>>;

// Reduced row echelon form in place; returns pivot columns.
template <class T>
std::vector<int> rref(Mat<T>& m) {
  std::vector<int> pivots;
  if (m.empty()) return pivots;
  int rows = static_cast<int>(m.size()), cols = static_cast<int>(m[0].size());
  int r = 0;
  for (int c = 0; c < cols && r < rows; ++c) {
    int piv = -1;
    for (int i = r; i < rows; ++i)
      if (!is_zero(m[i][c])) {
        piv = i;
        break;
      }
    if (piv < 0) continue;
    std::swap(m[r], m[piv]);
    T inv = T(1) / m[r][c];
    for (int j = c; j < cols; ++j) m[r][j] = m[r][j] * inv;
    for (int i = 0; i < rows; ++i) {
      if (i == r || is_zero(m[i][c])) continue;
      T f = m[i][c];
      for (int j = c; j < cols; ++j) m[i][j] = m[i][j] - f * m[r][j];
    }
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

template <class T>
int rank(Mat<T> m) {
  return static_cast<int>(rref(m).size());
}

// Basis of the right kernel {x : m x = 0}; cols given for empty m.
template <class T>
std::vector<std::vector<T>> nullspace(Mat<T> m, int cols) {
  std::vector<int> piv = rref(m);
  std::vector<char> is_piv(cols, 0);
  for (int p : piv) is_piv[p] = 1;
  std::vector<std::vector<T>> basis;
  for (int f = 0; f < cols; ++f) {
    if (is_piv[f]) continue;
    std::vector<T> v(cols, T(0));
    v[f] = T(1);
    for (size_t i = 0; i < piv.size(); ++i) v[piv[i]] = -m[i][f];
    basis.push_back(std::move(v));
  }
  return basis;
}

// Some solution of m x = b, or nullopt.
template <class T>
std::optional<std::vector<T>> solve(const Mat<T>& m, const std::vector<T>& b, int cols) {
  Mat<T> a = m;
  for (size_t i = 0; i < a.size(); ++i) a[i].push_back(b[i]);
  std::vector<int> piv = rref(a);
  if (!piv.empty() && piv.back() == cols) return std::nullopt;
  std::vector<T> x(cols, T(0));
  for (size_t i = 0; i < piv.size(); ++i) x[piv[i]] = a[i][cols];
  return x;
}

template <class T>
std::optional<Mat<T>> inverse(const Mat<T>& m) {
  int n = static_cast<int>(m.size());
  Mat<T> a = m;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a[i].push_back(T(i == j ? 1 : 0));
  std::vector<int> piv = rref(a);
  if (static_cast<int>(piv.size()) < n || piv[n - 1] != n - 1) return std::nullopt;
  Mat<T> inv(n);
  for (int i = 0; i < n; ++i) inv[i].assign(a[i].begin() + n, a[i].end());
  return inv;
}

template <class T>
std::vector<T> mat_vec(const Mat<T>& m, const std::vector<T>& v) {
  std::vector<T> out(m.size(), T(0));
  for (size_t i = 0; i < m.size(); ++i)
    for (size_t j = 0; j < v.size(); ++j)
      if (!is_zero(m[i][j]) && !is_zero(v[j])) out[i] = out[i] + m[i][j] * v[j];
  return out;
}

template <class T>
Mat<T> transpose(const Mat<T>& m, int cols) {
  Mat<T> t(cols, std::vector<T>(m.size()));
  for (size_t i = 0; i < m.size(); ++i)
    for (int j = 0; j < cols; ++j) t[j][i] = m[i][j];
  return t;
}

template <class T>
T dot(const std::vector<T>& a, const std::vector<T>& b) {
  T s(0);
  for (size_t i = 0; i < a.size(); ++i)
    if (!is_zero(a[i]) && !is_zero(b[i])) s = s + a[i] * b[i];
  return s;
}

}  // namespace cutproj
