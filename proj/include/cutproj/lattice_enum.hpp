#pragma once

// Double-precision model of gamma -> gamma_< with per-entry error bounds, and the pivot
// enumeration: free coordinates run over a box, pivot coordinates are solved for.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <stdexcept>
#include <vector>

#include "cutproj/linalg.hpp"
#include "cutproj/scheme.hpp"
#include "cutproj/util.hpp"

namespace cutproj {

struct DoubleModel {
  int k = 0, n = 0;
  std::vector<double> p;  // n*k, row-major
  std::vector<double> e;  // entry error bounds
  std::vector<int> pivots, frees;
  std::vector<double> ainv;  // n*n inverse of the pivot block

  static DoubleModel make(const InternalSystem& s) { return make(s.proj, s.k); }

  // Rows of a map Z^k -> R^n with entries in one field.
  static DoubleModel make(const FieldMat& proj, int k) {
    DoubleModel m;
    m.k = k;
    m.n = static_cast<int>(proj.size());
    for (int r = 0; r < m.n; ++r)
      for (int j = 0; j < k; ++j) {
        auto enc = to_float(proj[r][j], 80);
        double mid = 0.5 * (enc.lo + enc.hi);
        m.p.push_back(mid);
        m.e.push_back(0.5 * (enc.hi - enc.lo) + std::abs(mid) * 1e-16 + 1e-300);
      }
    // Pivot columns: the n-subset with the smallest box-volume factor prod_i sum_j |A^{-1}_ij|.
    double best = std::numeric_limits<double>::infinity();
    for_each_subset(k, m.n, [&](const std::vector<int>& sub) {
      FieldMat a(m.n, FieldVec(m.n));
      for (int r = 0; r < m.n; ++r)
        for (int c = 0; c < m.n; ++c) a[r][c] = proj[r][sub[c]];
      auto inv = inverse(a);
      if (!inv) return;
      std::vector<double> iv;
      double vol = 1;
      for (int r = 0; r < m.n; ++r) {
        double row = 0;
        for (int c = 0; c < m.n; ++c) {
          iv.push_back((*inv)[r][c].approx());
          row += std::abs(iv.back());
        }
        vol *= row;
      }
      if (vol < best) {
        best = vol;
        m.pivots = sub;
        m.ainv = iv;
      }
    });
    if (m.pivots.empty()) throw std::logic_error("DoubleModel: internal projection has rank below n");
    for (int j = 0; j < k; ++j)
      if (std::find(m.pivots.begin(), m.pivots.end(), j) == m.pivots.end()) m.frees.push_back(j);
    return m;
  }

  double coord(const std::vector<long>& g, int r) const {
    double x = 0;
    for (int j = 0; j < k; ++j) x += p[r * k + j] * static_cast<double>(g[j]);
    return x;
  }
  // Bound on |coord(g, r) - exact coordinate|.
  double err(const std::vector<long>& g, int r) const {
    double a = 0, b = 0;
    for (int j = 0; j < k; ++j) {
      double gj = std::abs(static_cast<double>(g[j]));
      a += gj * e[r * k + j];
      b += gj * std::abs(p[r * k + j]);
    }
    return a + b * (k + 2) * 1.2e-16;
  }
};

inline long linf(const std::vector<long>& g) {
  long m = 0;
  for (long x : g) m = std::max(m, std::abs(x));
  return m;
}

inline double free_box_size(int f, long R) { return std::pow(2.0 * static_cast<double>(R) + 1.0, f); }

// Calls visit_free(gamma_F, shell) for every free vector with |gamma_F|_inf = shell, shells in increasing order.
inline void for_each_free_shell(int f, long R, const std::function<bool(const std::vector<long>&, long)>& visit) {
  std::vector<long> g(f, 0);
  if (f == 0) {
    visit(g, 0);
    return;
  }
  for (long s = 0; s <= R; ++s) {
    // Recursive generation of vectors in [-s, s]^f with max |x| = s.
    std::function<bool(int, bool)> rec = [&](int i, bool hit) -> bool {
      if (i == f) return hit || s == 0 ? visit(g, s) : true;
      if (i == f - 1 && !hit && s > 0) {
        for (long v : {-s, s}) {
          g[i] = v;
          if (!visit(g, s)) return false;
        }
        return true;
      }
      for (long v = -s; v <= s; ++v) {
        g[i] = v;
        if (!rec(i + 1, hit || std::abs(v) == s)) return false;
      }
      return true;
    };
    if (!rec(0, false)) return;
  }
}

// Region callback: for the given free part (and its base image y_F = B gamma_F), fill the
// center and half-widths of an internal box the image must reach; return false to skip.
using RegionFn = std::function<bool(const std::vector<long>& gf, long shell, const std::vector<double>& yF,
                                    std::vector<double>& center, std::vector<double>& half)>;

// Enumerates gamma with |gamma|_inf <= R, gamma_F in shells of increasing norm, and gamma_P in
// the pivot box covering the region (a superset; callers filter exactly). visit returns false to stop.
inline void pivot_enumerate(const DoubleModel& m, long R, const RegionFn& region,
                            const std::function<bool(const std::vector<long>&)>& visit) {
  int f = static_cast<int>(m.frees.size()), n = m.n;
  std::vector<long> g(m.k, 0), gp(n);
  std::vector<double> yF(n), center(n), half(n), lo(n), hi(n);
  for_each_free_shell(f, R, [&](const std::vector<long>& gf, long shell) -> bool {
    for (int j = 0; j < f; ++j) g[m.frees[j]] = gf[j];
    for (int r = 0; r < n; ++r) {
      double y = 0;
      for (int j = 0; j < f; ++j) y += m.p[r * m.k + m.frees[j]] * static_cast<double>(gf[j]);
      yF[r] = y;
    }
    if (!region(gf, shell, yF, center, half)) return true;
    // gamma_P = A^{-1}(y - yF) for y in the box.
    for (int i = 0; i < n; ++i) {
      double c = 0, h = 0;
      for (int j = 0; j < n; ++j) {
        c += m.ainv[i * n + j] * (center[j] - yF[j]);
        h += std::abs(m.ainv[i * n + j]) * half[j];
      }
      h += 1e-9 * (1 + std::abs(c)) + 1e-9;
      double l = std::ceil(c - h), u = std::floor(c + h);
      l = std::max(l, -static_cast<double>(R));
      u = std::min(u, static_cast<double>(R));
      if (l > u) return true;
      lo[i] = l;
      hi[i] = u;
    }
    for (int i = 0; i < n; ++i) gp[i] = static_cast<long>(lo[i]);
    while (true) {
      for (int i = 0; i < n; ++i) g[m.pivots[i]] = gp[i];
      if (!visit(g)) return false;
      int i = 0;
      while (i < n && gp[i] == static_cast<long>(hi[i])) {
        gp[i] = static_cast<long>(lo[i]);
        ++i;
      }
      if (i == n) break;
      ++gp[i];
    }
    return true;
  });
}

}  // namespace cutproj
