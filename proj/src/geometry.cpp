#include "cutproj/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <numeric>
#include <ostream>
#include <set>
#include <stdexcept>

#include "cutproj/lattice_enum.hpp"
#include "cutproj/linalg.hpp"

namespace cutproj {

std::vector<FieldVec> polytope_vertices(FieldPtr field, int n, const std::vector<HalfSpace>& hs) {
  return window_vertices(std::move(field), n, hs);
}

namespace {

FE zero_of(const FieldPtr& f) { return FE(f, Rat(0)); }

// Vertices of a convex polygon in counter-clockwise order.
std::vector<FieldVec> ccw_order(std::vector<FieldVec> v) {
  double cx = 0, cy = 0;
  for (auto& p : v) {
    cx += p[0].approx();
    cy += p[1].approx();
  }
  cx /= v.size();
  cy /= v.size();
  std::sort(v.begin(), v.end(), [&](const FieldVec& a, const FieldVec& b) {
    return std::atan2(a[1].approx() - cy, a[0].approx() - cx) < std::atan2(b[1].approx() - cy, b[0].approx() - cx);
  });
  return v;
}

FE shoelace(const std::vector<FieldVec>& v, const FieldPtr& f) {
  FE a = zero_of(f);
  for (size_t i = 0; i < v.size(); ++i) {
    const auto& p = v[i];
    const auto& q = v[(i + 1) % v.size()];
    a += p[0] * q[1] - q[0] * p[1];
  }
  return a.scaled(Rat(1, 2));
}

Int from_i128(__int128 v) {
  bool neg = v < 0;
  unsigned __int128 u = neg ? static_cast<unsigned __int128>(-(v + 1)) + 1 : static_cast<unsigned __int128>(v);
  Int hi(static_cast<unsigned long>(static_cast<std::uint64_t>(u >> 64)));
  Int lo(static_cast<unsigned long>(static_cast<std::uint64_t>(u)));
  Int r = (hi << 64) + lo;
  return neg ? Int(-r) : r;
}

// Per class: exact integer keys of offsets, scaled by a common denominator L.
struct ClassKeys {
  int D = 1;
  Int L = 1;
  bool wide = false;                                 // coefficients too large for the 128-bit path
  std::map<int, std::vector<std::vector<long>>> M;  // halfspace -> D x (k+1), last column the base
  std::map<int, std::vector<std::vector<Int>>> W;   // same, arbitrary precision
};

ClassKeys class_keys(const InternalSystem& s, int cls, const std::vector<FieldVec>& rows, const std::vector<FE>& bases) {
  ClassKeys ck;
  ck.D = s.field->degree();
  std::vector<RatMat> parts;
  for (size_t t = 0; t < rows.size(); ++t) {
    FieldVec v = rows[t];
    v.push_back(bases[t]);
    parts.push_back(rational_split(v, ck.D));
    for (auto& row : parts.back())
      for (auto& q : row) mpz_lcm(ck.L.get_mpz_t(), ck.L.get_mpz_t(), q.get_den_mpz_t());
  }
  const auto& hs = s.classes[cls];
  for (size_t t = 0; t < rows.size(); ++t) {
    std::vector<std::vector<Int>> m;
    for (auto& row : parts[t]) {
      std::vector<Int> out;
      for (auto& q : row) {
        out.push_back(q.get_num() * (ck.L / q.get_den()));
        if (abs(out.back()) > Int(1L << 52)) ck.wide = true;
      }
      m.push_back(out);
    }
    ck.W[hs[t]] = m;
  }
  if (!ck.wide)
    for (auto& [h, m] : ck.W) {
      auto& dst = ck.M[h];
      for (auto& row : m) {
        std::vector<long> out;
        for (auto& z : row) out.push_back(z.get_si());
        dst.push_back(out);
      }
    }
  return ck;
}

struct ClassData {
  FieldVec normal;
  FE lo, hi;  // range of <normal, x> over W
  std::vector<FieldVec> rows;
  std::vector<FE> bases;
  ClassKeys keys;
};

ClassData class_data(const InternalSystem& s, int cls) {
  ClassData c;
  c.normal = s.class_normal[cls];
  bool first = true;
  for (auto& v : s.vertices) {
    FE t = dot(c.normal, v);
    if (first || cmp(t, c.lo) < 0) c.lo = t;
    if (first || cmp(t, c.hi) > 0) c.hi = t;
    first = false;
  }
  int piv = 0;
  while (c.normal[piv].is_zero()) ++piv;
  for (int h : s.classes[cls]) {
    FE lam = s.halfspaces[h].normal[piv] / c.normal[piv];
    FE inv = lam.inverse();
    FieldVec row;
    for (auto& x : s.hw[h]) row.push_back(x * inv);
    c.rows.push_back(row);
    c.bases.push_back(s.halfspaces[h].offset * inv);
  }
  c.keys = class_keys(s, cls, c.rows, c.bases);
  return c;
}

}  // namespace

FE window_measure(const InternalSystem& s) {
  if (s.n == 1) {
    FE lo = s.vertices[0][0], hi = lo;
    for (auto& v : s.vertices) {
      if (cmp(v[0], lo) < 0) lo = v[0];
      if (cmp(v[0], hi) > 0) hi = v[0];
    }
    return hi - lo;
  }
  if (s.n == 2) return shoelace(ccw_order(s.vertices), s.field);
  throw std::invalid_argument("DIMENSION_UNSUPPORTED: exact measure needs n <= 2");
}

InternalSystem scaled_lattice(const InternalSystem& s, const Int& N) {
  if (N == 1) return s;
  InternalSystem t = s;
  Rat inv(Int(1), N);
  for (auto* m : {&t.proj, &t.hw, &t.cw})
    for (auto& row : *m)
      for (auto& x : row) x = x.scaled(inv);
  return t;
}

// ---------------------------------------------------------------------------

CutOffsets::CutOffsets(const InternalSystem& s, int cls, long r) : s_(&s), cls_(cls), k_(s.k) {
  ClassData cd = class_data(s, cls);
  double lo_d = cd.lo.approx(), hi_d = cd.hi.approx();
  double tol = 1e-9 * (1 + std::abs(lo_d) + std::abs(hi_d));
  std::vector<double> err;
  const auto& hs = s.classes[cls];
  for (size_t t = 0; t < hs.size(); ++t) {
    auto m = DoubleModel::make(FieldMat{cd.rows[t]}, s.k);
    auto be = to_float(cd.bases[t], 80);
    double bd = 0.5 * (be.lo + be.hi), bde = 0.5 * (be.hi - be.lo) + std::abs(bd) * 1e-16;
    RegionFn region = [&](const std::vector<long>&, long, const std::vector<double>&, std::vector<double>& c,
                          std::vector<double>& h) {
      c[0] = 0.5 * (lo_d + hi_d) - bd;
      h[0] = 0.5 * (hi_d - lo_d) + bde + tol;
      return true;
    };
    pivot_enumerate(m, r, region, [&](const std::vector<long>& g) {
      double x = bd + m.coord(g, 0), e = m.err(g, 0) + bde;
      bool inside;
      if (x - e > lo_d + tol && x + e < hi_d - tol) {
        inside = true;
      } else if (x + e < lo_d - tol || x - e > hi_d + tol) {
        inside = false;
      } else {
        FE v = cd.bases[t];
        for (int j = 0; j < s.k; ++j)
          if (g[j]) v += cd.rows[t][j].mul_int(g[j]);
        inside = cmp(v, cd.lo) > 0 && cmp(v, cd.hi) < 0;
      }
      if (inside) {
        h_.push_back(hs[t]);
        g_.insert(g_.end(), g.begin(), g.end());
        x_.push_back(x);
        err.push_back(e);
      }
      return true;
    });
  }
  // Sort by exact value and drop repeated translates.
  const ClassKeys& ck = cd.keys;
  auto key = [&](size_t i, int d) {
    const auto& M = ck.M.at(h_[i]);
    __int128 v = M[d][k_];
    for (int j = 0; j < k_; ++j) v += static_cast<__int128>(M[d][j]) * g_[i * k_ + j];
    return v;
  };
  auto wide_key = [&](size_t i, int d) {
    const auto& M = ck.W.at(h_[i]);
    Int v = M[d][k_];
    for (int j = 0; j < k_; ++j) v += M[d][j] * g_[i * k_ + j];
    return v;
  };
  auto keys_equal = [&](size_t i, size_t j) {
    for (int d = 0; d < ck.D; ++d)
      if (ck.wide ? wide_key(i, d) != wide_key(j, d) : key(i, d) != key(j, d)) return false;
    return true;
  };
  auto exact = [&](size_t i) {
    std::vector<Rat> c;
    for (int d = 0; d < ck.D; ++d) {
      Rat q(ck.wide ? wide_key(i, d) : from_i128(key(i, d)), ck.L);
      q.canonicalize();
      c.push_back(q);
    }
    return FE(s.field, c);
  };
  auto less = [&](size_t i, size_t j) {
    if (x_[i] + err[i] < x_[j] - err[j]) return true;
    if (x_[j] + err[j] < x_[i] - err[i]) return false;
    if (keys_equal(i, j)) return false;
    return cmp(exact(i), exact(j)) < 0;
  };
  std::vector<size_t> ord(h_.size());
  std::iota(ord.begin(), ord.end(), 0);
  std::sort(ord.begin(), ord.end(), less);
  std::vector<size_t> keep;
  for (size_t i : ord)
    if (keep.empty() || !keys_equal(keep.back(), i)) keep.push_back(i);
  std::vector<int> h2;
  std::vector<long> g2;
  std::vector<double> x2;
  for (size_t i : keep) {
    h2.push_back(h_[i]);
    g2.insert(g2.end(), g_.begin() + static_cast<long>(i * k_), g_.begin() + static_cast<long>((i + 1) * k_));
    x2.push_back(x_[i]);
  }
  h_ = std::move(h2);
  g_ = std::move(g2);
  x_ = std::move(x2);
}

std::vector<long> CutOffsets::gamma(size_t i) const {
  return std::vector<long>(g_.begin() + static_cast<long>(i * k_), g_.begin() + static_cast<long>((i + 1) * k_));
}

FE CutOffsets::value(size_t i) const {
  int h = h_[i];
  const auto& nu = s_->class_normal[cls_];
  int piv = 0;
  while (nu[piv].is_zero()) ++piv;
  FE lam = s_->halfspaces[h].normal[piv] / nu[piv];
  FE v = s_->halfspaces[h].offset;
  for (int j = 0; j < k_; ++j)
    if (g_[i * k_ + j]) v += s_->hw[h][j].mul_int(g_[i * k_ + j]);
  return v / lam;
}

// ---------------------------------------------------------------------------

namespace {

struct Arrangement {
  std::vector<FieldVec> normals;
  std::vector<std::vector<FE>> offsets;
  std::vector<std::vector<std::pair<int, std::vector<long>>>> translates;
};

Arrangement arrangement(const InternalSystem& s, long r) {
  Arrangement a;
  for (int c = 0; c < s.num_classes(); ++c) {
    CutOffsets co(s, c, r);
    a.normals.push_back(s.class_normal[c]);
    std::vector<FE> vals;
    std::vector<std::pair<int, std::vector<long>>> tr;
    for (size_t i = 0; i < co.size(); ++i) {
      vals.push_back(co.value(i));
      tr.push_back({co.halfspace(i), co.gamma(i)});
    }
    a.offsets.push_back(std::move(vals));
    a.translates.push_back(std::move(tr));
  }
  return a;
}

// Number of offsets strictly below t; -1 if t equals one of them.
long slab_of(const std::vector<FE>& offs, const FE& t) {
  auto it = std::lower_bound(offs.begin(), offs.end(), t, [](const FE& a, const FE& b) { return cmp(a, b) < 0; });
  if (it != offs.end() && cmp(*it, t) == 0) return -1;
  return it - offs.begin();
}

void split_polygon(const std::vector<FieldVec>& v, const std::vector<FE>& d, const FE& t, std::vector<FieldVec>& lv,
                   std::vector<FE>& ld, std::vector<FieldVec>& rv, std::vector<FE>& rd) {
  size_t m = v.size();
  std::vector<int> sg(m);
  for (size_t i = 0; i < m; ++i) sg[i] = cmp(d[i], t);
  for (size_t i = 0; i < m; ++i) {
    size_t j = (i + 1) % m;
    if (sg[i] <= 0) {
      lv.push_back(v[i]);
      ld.push_back(d[i]);
    }
    if (sg[i] >= 0) {
      rv.push_back(v[i]);
      rd.push_back(d[i]);
    }
    if (sg[i] * sg[j] < 0) {
      FE lam = (t - d[i]) / (d[j] - d[i]);
      FieldVec p(v[i].size());
      for (size_t c = 0; c < p.size(); ++c) p[c] = v[i][c] + lam * (v[j][c] - v[i][c]);
      lv.push_back(p);
      ld.push_back(t);
      rv.push_back(p);
      rd.push_back(t);
    }
  }
}

Cell make_cell(const std::vector<FieldVec>& v, const FieldPtr& f, const std::vector<int>& slab) {
  Cell c;
  c.vertices = v;
  c.slab = slab;
  FieldVec mid(v[0].size(), zero_of(f));
  for (auto& p : v)
    for (size_t i = 0; i < p.size(); ++i) mid[i] += p[i];
  for (auto& x : mid) x = x.scaled(Rat(1, static_cast<long>(v.size())));
  c.interior = mid;
  if (v[0].size() == 1) {
    c.measure = v[1][0] - v[0][0];
  } else {
    c.measure = shoelace(v, f);
  }
  return c;
}

void cells_from(const InternalSystem& s, const Arrangement& a, const std::function<void(const Cell&)>& visit) {
  if (s.n == 1) {
    const FE& nu = a.normals[0][0];
    FE lo = s.vertices[0][0], hi = lo;
    for (auto& v : s.vertices) {
      if (cmp(v[0], lo) < 0) lo = v[0];
      if (cmp(v[0], hi) > 0) hi = v[0];
    }
    std::vector<FE> xs;
    for (auto& t : a.offsets[0]) xs.push_back(t / nu);
    bool rev = nu.sign() < 0;
    if (rev) std::reverse(xs.begin(), xs.end());
    std::vector<FE> b{lo};
    b.insert(b.end(), xs.begin(), xs.end());
    b.push_back(hi);
    long m = static_cast<long>(xs.size());
    for (long i = 0; i + 1 < static_cast<long>(b.size()); ++i) {
      int sl = static_cast<int>(rev ? m - i : i);
      visit(make_cell({{b[i]}, {b[i + 1]}}, s.field, {sl}));
    }
    return;
  }
  int F = static_cast<int>(a.normals.size());
  std::vector<int> slab(F, 0);
  std::function<void(const std::vector<FieldVec>&, int)> rec = [&](const std::vector<FieldVec>& poly, int f) {
    if (f == F) {
      visit(make_cell(poly, s.field, slab));
      return;
    }
    std::vector<FE> d;
    for (auto& p : poly) d.push_back(dot(a.normals[f], p));
    FE lo = d[0], hi = d[0];
    for (auto& x : d) {
      if (cmp(x, lo) < 0) lo = x;
      if (cmp(x, hi) > 0) hi = x;
    }
    const auto& offs = a.offsets[f];
    auto lt = [](const FE& x, const FE& y) { return cmp(x, y) < 0; };
    long i0 = std::upper_bound(offs.begin(), offs.end(), lo, lt) - offs.begin();
    long i1 = std::lower_bound(offs.begin(), offs.end(), hi, lt) - offs.begin();
    std::vector<FieldVec> rest = poly;
    std::vector<FE> rd = d;
    for (long i = i0; i < i1; ++i) {
      std::vector<FieldVec> lv, rv;
      std::vector<FE> ld, rd2;
      split_polygon(rest, rd, offs[i], lv, ld, rv, rd2);
      slab[f] = static_cast<int>(i);
      rec(lv, f + 1);
      rest = std::move(rv);
      rd = std::move(rd2);
    }
    slab[f] = static_cast<int>(i1);
    rec(rest, f + 1);
  };
  rec(ccw_order(s.vertices), 0);
}

void check_dim(const InternalSystem& s) {
  if (s.n > 2) throw std::invalid_argument("DIMENSION_UNSUPPORTED: cut regions need n <= 2");
}

}  // namespace

void for_each_cell(const InternalSystem& s0, long r, const std::function<void(const Cell&)>& visit, const Int& N) {
  check_dim(s0);
  auto s = scaled_lattice(s0, N);
  cells_from(s, arrangement(s, r), visit);
}

CellComplex cut_regions(const InternalSystem& s0, long r, const Int& N) {
  check_dim(s0);
  auto s = scaled_lattice(s0, N);
  auto a = arrangement(s, r);
  CellComplex cx;
  cx.n = s.n;
  cx.r = r;
  cx.N = N;
  cells_from(s, a, [&](const Cell& c) { cx.cells.push_back(c); });
  cx.normals = std::move(a.normals);
  cx.offsets = std::move(a.offsets);
  cx.translates = std::move(a.translates);
  return cx;
}

double cell_inradius(const Cell& c) {
  if (c.vertices[0].size() == 1) return to_float(c.measure, 60).lo / 2 * (1 - 1e-15);
  size_t m = c.vertices.size();
  std::vector<double> ux, uy, b;
  for (size_t i = 0; i < m; ++i) {
    const auto& p = c.vertices[i];
    const auto& q = c.vertices[(i + 1) % m];
    double px = p[0].approx(), py = p[1].approx(), qx = q[0].approx(), qy = q[1].approx();
    double nx = qy - py, ny = px - qx, len = std::hypot(nx, ny);
    if (len == 0) continue;
    ux.push_back(nx / len);
    uy.push_back(ny / len);
    b.push_back((nx * px + ny * py) / len);
  }
  // max rho subject to <u_i, c> + rho <= b_i; optimum at a vertex of three active constraints.
  size_t e = ux.size();
  double best = 0;
  for (size_t i = 0; i < e; ++i)
    for (size_t j = i + 1; j < e; ++j)
      for (size_t l = j + 1; l < e; ++l) {
        double a[3][3] = {{ux[i], uy[i], 1}, {ux[j], uy[j], 1}, {ux[l], uy[l], 1}};
        double rhs[3] = {b[i], b[j], b[l]};
        double det = a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1]) - a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0]) +
                     a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0]);
        if (std::abs(det) < 1e-14) continue;
        double sol[3];
        for (int col = 0; col < 3; ++col) {
          double t[3][3];
          for (int rr = 0; rr < 3; ++rr)
            for (int cc = 0; cc < 3; ++cc) t[rr][cc] = cc == col ? rhs[rr] : a[rr][cc];
          sol[col] = (t[0][0] * (t[1][1] * t[2][2] - t[1][2] * t[2][1]) - t[0][1] * (t[1][0] * t[2][2] - t[1][2] * t[2][0]) +
                      t[0][2] * (t[1][0] * t[2][1] - t[1][1] * t[2][0])) /
                     det;
        }
        bool ok = sol[2] >= 0;
        for (size_t q = 0; q < e && ok; ++q)
          if (ux[q] * sol[0] + uy[q] * sol[1] + sol[2] > b[q] + 1e-12 * (1 + std::abs(b[q]))) ok = false;
        if (ok) best = std::max(best, sol[2]);
      }
  return best * (1 - 1e-9);
}

double min_inradius(const CellComplex& c) {
  double m = std::numeric_limits<double>::infinity();
  for (auto& cell : c.cells) m = std::min(m, cell_inradius(cell));
  return m;
}

CellStats cell_stats(const InternalSystem& s, long r, const Int& N) {
  CellStats st;
  st.total = FE(s.field, Rat(0));
  st.min_inradius = std::numeric_limits<double>::infinity();
  for_each_cell(
      s, r,
      [&](const Cell& c) {
        ++st.count;
        st.total += c.measure;
        double ir = cell_inradius(c);
        st.min_inradius = std::min(st.min_inradius, ir);
        st.max_inradius = std::max(st.max_inradius, ir);
      },
      N);
  return st;
}

GapResult min_cell_length_1d(const InternalSystem& s, long r) {
  if (s.n != 1) throw std::invalid_argument("min_cell_length_1d: needs n = 1");
  CutOffsets co(s, 0, r);
  ClassData cd = class_data(s, 0);
  size_t m = co.size();
  // Positions along the class normal: lo, offsets..., hi.
  auto pos = [&](size_t i) -> double {
    if (i == 0) return cd.lo.approx();
    if (i == m + 1) return cd.hi.approx();
    return co.approx(i - 1);
  };
  auto exact = [&](size_t i) -> FE {
    if (i == 0) return cd.lo;
    if (i == m + 1) return cd.hi;
    return co.value(i - 1);
  };
  // Double positions of offsets are accurate to far better than this slack at the tested scales.
  double slack = 1e-9 * (1 + std::abs(cd.lo.approx()) + std::abs(cd.hi.approx())) + 1e-15 * static_cast<double>(r);
  double best_hi = std::numeric_limits<double>::infinity();
  for (size_t i = 0; i + 1 < m + 2; ++i) best_hi = std::min(best_hi, pos(i + 1) - pos(i) + slack);
  GapResult res;
  res.cells = m + 1;
  bool have = false;
  for (size_t i = 0; i + 1 < m + 2; ++i) {
    if (pos(i + 1) - pos(i) - slack > best_hi) continue;
    FE gap = exact(i + 1) - exact(i);
    if (!have || cmp(gap, res.length) < 0) {
      res.length = gap;
      have = true;
    }
  }
  FE nu = cd.normal[0];
  if (nu.sign() < 0) nu = -nu;
  res.length = res.length / nu;
  auto e = to_float(res.length, 80);
  res.lo = e.lo;
  res.hi = e.hi;
  return res;
}

std::optional<std::vector<int>> locate_slabs(const CellComplex& cx, const FieldVec& x) {
  std::vector<int> out;
  for (size_t f = 0; f < cx.normals.size(); ++f) {
    long sl = slab_of(cx.offsets[f], dot(cx.normals[f], x));
    if (sl < 0) return std::nullopt;
    out.push_back(static_cast<int>(sl));
  }
  return out;
}

bool refines(const CellComplex& fine, const CellComplex& coarse) {
  if (fine.normals.size() != coarse.normals.size()) return false;
  std::set<std::vector<int>> present;
  for (auto& c : coarse.cells) present.insert(c.slab);
  for (auto& c : fine.cells) {
    auto sl = locate_slabs(coarse, c.interior);
    if (!sl || !present.count(*sl)) return false;
    for (auto& v : c.vertices)
      for (size_t f = 0; f < coarse.normals.size(); ++f) {
        FE t = dot(coarse.normals[f], v);
        const auto& offs = coarse.offsets[f];
        int s = (*sl)[f];
        if (s > 0 && cmp(t, offs[s - 1]) < 0) return false;
        if (s < static_cast<int>(offs.size()) && cmp(t, offs[s]) > 0) return false;
      }
  }
  return true;
}

std::vector<std::vector<long>> difference_offsets(const InternalSystem& s, long r) {
  std::vector<double> half(s.n, 0);
  for (int c = 0; c < s.n; ++c) {
    double lo = 1e300, hi = -1e300;
    for (auto& v : s.vertices) {
      lo = std::min(lo, v[c].approx());
      hi = std::max(hi, v[c].approx());
    }
    half[c] = (hi - lo) * (1 + 1e-9) + 1e-9;
  }
  auto m = DoubleModel::make(s);
  std::vector<std::vector<long>> out;
  RegionFn region = [&](const std::vector<long>&, long, const std::vector<double>&, std::vector<double>& c,
                        std::vector<double>& h) {
    for (int i = 0; i < s.n; ++i) {
      c[i] = 0;
      h[i] = half[i];
    }
    return true;
  };
  pivot_enumerate(m, r, region, [&](const std::vector<long>& g) {
    for (int i = 0; i < s.n; ++i)
      if (std::abs(m.coord(g, i)) > half[i] + m.err(g, i)) return true;
    out.push_back(g);
    return true;
  });
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<int> point_signature(const InternalSystem& s, const std::vector<std::vector<long>>& offs, const FieldVec& x) {
  std::vector<double> xd;
  for (auto& c : x) xd.push_back(c.approx());
  std::vector<std::vector<double>> nd;
  std::vector<double> od;
  for (auto& h : s.halfspaces) {
    std::vector<double> v;
    for (auto& c : h.normal) v.push_back(c.approx());
    nd.push_back(v);
    od.push_back(h.offset.approx());
  }
  std::vector<std::vector<double>> pd(s.n, std::vector<double>(s.k));
  for (int r = 0; r < s.n; ++r)
    for (int j = 0; j < s.k; ++j) pd[r][j] = s.proj[r][j].approx();
  std::vector<int> out;
  std::vector<double> y(s.n);
  for (size_t i = 0; i < offs.size(); ++i) {
    double mag = 0;
    for (int r = 0; r < s.n; ++r) {
      y[r] = xd[r];
      mag += std::abs(xd[r]);
      for (int j = 0; j < s.k; ++j) {
        y[r] += pd[r][j] * offs[i][j];
        mag += std::abs(pd[r][j] * offs[i][j]);
      }
    }
    bool inside = true, unsure = false;
    for (size_t h = 0; h < nd.size(); ++h) {
      double v = -od[h], w = std::abs(od[h]);
      for (int r = 0; r < s.n; ++r) {
        v += nd[h][r] * y[r];
        w += std::abs(nd[h][r]) * (std::abs(y[r]) + mag);
      }
      double tol = 1e-12 * (1 + w);
      if (v > tol) {
        inside = false;
        unsure = false;
        break;
      }
      if (v > -tol) unsure = true;
    }
    if (unsure) {
      FieldVec yy = s.project(offs[i]);
      for (int r = 0; r < s.n; ++r) yy[r] += x[r];
      inside = s.in_window(yy);
    }
    if (inside) out.push_back(static_cast<int>(i));
  }
  return out;
}

std::vector<AcceptanceDomain> acceptance_domains(const InternalSystem& s0, const CellComplex& cx) {
  return acceptance_domains(s0, cx, difference_offsets(scaled_lattice(s0, cx.N), cx.r));
}

std::vector<AcceptanceDomain> acceptance_domains(const InternalSystem& s0, const CellComplex& cx,
                                                 const std::vector<std::vector<long>>& offs) {
  for (auto& o : offs)
    if (linf(o) > cx.r) throw std::invalid_argument("acceptance_domains: offset outside the cut radius");
  auto s = scaled_lattice(s0, cx.N);
  FE area = window_measure(s);
  std::map<std::vector<int>, size_t> index;
  std::vector<AcceptanceDomain> out;
  for (size_t c = 0; c < cx.cells.size(); ++c) {
    auto sig = point_signature(s, offs, cx.cells[c].interior);
    auto it = index.find(sig);
    if (it == index.end()) {
      AcceptanceDomain d;
      for (int i : sig) d.members.push_back(offs[i]);
      d.volume = FE(s.field, Rat(0));
      it = index.emplace(sig, out.size()).first;
      out.push_back(std::move(d));
    }
    auto& d = out[it->second];
    d.cells.push_back(static_cast<int>(c));
    d.volume += cx.cells[c].measure;
  }
  for (auto& d : out) d.frequency = d.volume / area;
  return out;
}

std::vector<AcceptanceDomain> acceptance_domains(const InternalSystem& s, long r) {
  return acceptance_domains(s, cut_regions(s, r));
}

ProductCheck product_refinement_check(const InternalSystem& s, const Decomposition& dec, long r) {
  ProductCheck pc;
  if (dec.parts.size() <= 1) {
    pc.cells_ok = pc.domains_ok = true;
    return pc;
  }
  if (s.n != 2 || dec.parts.size() != 2) throw std::invalid_argument("product_refinement_check: needs two factors with n_i = 1");
  if (!dec.index_N || *dec.index_N != 1) throw std::domain_error("product_refinement_check: needs N = 1");
  std::vector<Subsystem> subs{subsystem(s, dec, 0), subsystem(s, dec, 1)};
  // lambda: sup-norm of gamma -> subsystem coordinates; mu: sup-norm of subsystem coordinates -> gamma.
  long lambda = 1, mu = 1;
  for (auto& sub : subs) {
    const auto& B = sub.lattice.hnf_basis();
    long colmax = 0;
    for (int j = 0; j < s.k; ++j) {
      long sum = 0;
      for (auto& row : B) sum += std::abs(row[j].get_si());
      colmax = std::max(colmax, sum);
    }
    mu = std::max(mu, colmax);
  }
  {
    IntMat all;
    for (auto& sub : subs)
      for (auto& row : sub.lattice.hnf_basis()) all.push_back(row);
    RatMat A(s.k, std::vector<Rat>(s.k));
    for (int i = 0; i < s.k; ++i)
      for (int j = 0; j < s.k; ++j) A[i][j] = Rat(all[j][i]);
    auto inv = inverse(A);
    if (!inv) throw std::logic_error("product_refinement_check: factor lattices do not span");
    int off = 0;
    for (auto& sub : subs) {
      int ki = sub.sys.k;
      for (int row = off; row < off + ki; ++row) {
        Rat sum = 0;
        for (int j = 0; j < s.k; ++j) sum += abs((*inv)[row][j]);
        Int c = sum.get_num() / sum.get_den() + (sum.get_den() == 1 ? 0 : 1);
        lambda = std::max(lambda, c.get_si());
      }
      off += ki;
    }
  }
  pc.lambda = lambda;
  FieldMat bcols(2, FieldVec(2));
  for (int i = 0; i < 2; ++i)
    for (int c = 0; c < 2; ++c) bcols[c][i] = dec.parts[i].basis[0][c];
  auto to_point = [&](const FE& a, const FE& b) {
    return FieldVec{bcols[0][0] * a + bcols[0][1] * b, bcols[1][0] * a + bcols[1][1] * b};
  };

  // Cells: sums of factor cells at radius lambda r lie in whole cells at radius r.
  auto whole = cut_regions(s, r);
  std::set<std::vector<int>> present;
  for (auto& c : whole.cells) present.insert(c.slab);
  auto c1 = cut_regions(subs[0].sys, lambda * r), c2 = cut_regions(subs[1].sys, lambda * r);
  pc.cells_ok = true;
  for (auto& a : c1.cells) {
    for (auto& b : c2.cells) {
      auto sl = locate_slabs(whole, to_point(a.interior[0], b.interior[0]));
      if (!sl || !present.count(*sl)) {
        pc.cells_ok = false;
        break;
      }
      for (auto& va : a.vertices)
        for (auto& vb : b.vertices) {
          FieldVec p = to_point(va[0], vb[0]);
          for (size_t f = 0; f < whole.normals.size(); ++f) {
            FE t = dot(whole.normals[f], p);
            const auto& offs = whole.offsets[f];
            int si = (*sl)[f];
            if ((si > 0 && cmp(t, offs[si - 1]) < 0) || (si < static_cast<int>(offs.size()) && cmp(t, offs[si]) > 0))
              pc.cells_ok = false;
          }
        }
    }
    if (!pc.cells_ok) break;
  }

  // Domains: each whole domain at radius mu r sits inside one sum of factor domains at radius r.
  auto wc = cut_regions(s, mu * r);
  auto doms = acceptance_domains(s, wc);
  auto o1 = difference_offsets(subs[0].sys, r), o2 = difference_offsets(subs[1].sys, r);
  FieldMat inv_b = *inverse(bcols);
  pc.domains_ok = true;
  for (auto& d : doms) {
    std::optional<std::pair<std::vector<int>, std::vector<int>>> seen;
    for (int ci : d.cells) {
      auto co = mat_vec(inv_b, wc.cells[ci].interior);
      auto p = std::make_pair(point_signature(subs[0].sys, o1, {co[0]}), point_signature(subs[1].sys, o2, {co[1]}));
      if (!seen) seen = p;
      else if (*seen != p) pc.domains_ok = false;
    }
  }
  return pc;
}

void write_cells_svg(std::ostream& os, const CellComplex& cx, const std::vector<AcceptanceDomain>* domains) {
  std::vector<int> colour(cx.cells.size(), 0);
  if (domains)
    for (size_t d = 0; d < domains->size(); ++d)
      for (int c : (*domains)[d].cells) colour[c] = static_cast<int>(d);
  double lo[2] = {1e300, 1e300}, hi[2] = {-1e300, -1e300};
  for (auto& c : cx.cells)
    for (auto& v : c.vertices)
      for (size_t i = 0; i < v.size(); ++i) {
        lo[i] = std::min(lo[i], v[i].approx());
        hi[i] = std::max(hi[i], v[i].approx());
      }
  if (cx.n == 1) {
    lo[1] = 0;
    hi[1] = 1;
  }
  double w = 800, scale = w / std::max(hi[0] - lo[0], hi[1] - lo[1]);
  double H = cx.n == 1 ? 60 : (hi[1] - lo[1]) * scale;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w + 20 << "\" height=\"" << H + 20 << "\">\n";
  auto fill = [&](int d) {
    unsigned h = static_cast<unsigned>(d) * 2654435761u;
    char buf[16];
    std::snprintf(buf, sizeof buf, "#%02x%02x%02x", 64 + (h & 0x7f), 64 + ((h >> 8) & 0x7f), 64 + ((h >> 16) & 0x7f));
    return std::string(buf);
  };
  for (size_t i = 0; i < cx.cells.size(); ++i) {
    const auto& c = cx.cells[i];
    if (cx.n == 1) {
      double a = 10 + (c.vertices[0][0].approx() - lo[0]) * scale, b = 10 + (c.vertices[1][0].approx() - lo[0]) * scale;
      os << "<rect x=\"" << a << "\" y=\"10\" width=\"" << b - a << "\" height=\"40\" fill=\"" << fill(colour[i])
         << "\" stroke=\"black\" stroke-width=\"0.3\"/>\n";
    } else {
      os << "<polygon points=\"";
      for (auto& v : c.vertices)
        os << 10 + (v[0].approx() - lo[0]) * scale << "," << 10 + (hi[1] - v[1].approx()) * scale << " ";
      os << "\" fill=\"" << fill(colour[i]) << "\" stroke=\"black\" stroke-width=\"0.3\"/>\n";
    }
  }
  os << "</svg>\n";
}

}  // namespace cutproj
