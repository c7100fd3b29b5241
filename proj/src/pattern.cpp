#include "cutproj/pattern.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <ostream>
#include <stdexcept>
#include <unordered_map>

#include "cutproj/lattice_enum.hpp"

namespace cutproj {

namespace {

struct VecHash {
  size_t operator()(const std::vector<long>& v) const {
    size_t h = 1469598103934665603ull;
    for (long x : v) h = (h ^ static_cast<size_t>(x)) * 1099511628211ull;
    return h;
  }
};

}  // namespace

PointSet generate_with_shift(const Scheme& sch, long eta_max, const FieldVec& shift) {
  const auto& s = sch.sys;
  if (!is_nonsingular_shift(s, shift)) throw std::invalid_argument("SINGULAR_HIT: shift meets a window hyperplane");
  PointSet ps;
  ps.sys = s;
  ps.phys = sch.spec.proj_physical;
  ps.shift = shift;
  ps.eta_max = eta_max;
  auto m = DoubleModel::make(s);
  std::vector<double> sd(s.n), lo(s.n, 1e300), hi(s.n, -1e300);
  for (int r = 0; r < s.n; ++r) sd[r] = shift[r].approx();
  for (auto& v : s.vertices)
    for (int r = 0; r < s.n; ++r) {
      lo[r] = std::min(lo[r], v[r].approx());
      hi[r] = std::max(hi[r], v[r].approx());
    }
  std::vector<std::vector<double>> nd;
  std::vector<double> od;
  for (auto& h : s.halfspaces) {
    std::vector<double> v;
    for (auto& c : h.normal) v.push_back(c.approx());
    nd.push_back(v);
    od.push_back(h.offset.approx());
  }
  int d = sch.spec.d;
  std::vector<std::vector<double>> phys(d, std::vector<double>(s.k));
  for (int r = 0; r < d; ++r)
    for (int j = 0; j < s.k; ++j) phys[r][j] = sch.spec.proj_physical[r][j].approx();

  RegionFn region = [&](const std::vector<long>&, long, const std::vector<double>&, std::vector<double>& c,
                        std::vector<double>& h) {
    for (int r = 0; r < s.n; ++r) {
      c[r] = 0.5 * (lo[r] + hi[r]) - sd[r];
      h[r] = 0.5 * (hi[r] - lo[r]) * (1 + 1e-9) + 1e-9;
    }
    return true;
  };
  std::vector<double> x(s.n);
  pivot_enumerate(m, eta_max, region, [&](const std::vector<long>& g) {
    double mag = 0;
    for (int r = 0; r < s.n; ++r) {
      x[r] = m.coord(g, r) + sd[r];
      mag = std::max(mag, m.err(g, r) + 1e-15 * (std::abs(x[r]) + std::abs(sd[r])));
    }
    bool inside = true, unsure = false;
    for (size_t h = 0; h < nd.size(); ++h) {
      double v = -od[h], w = 0;
      for (int r = 0; r < s.n; ++r) {
        v += nd[h][r] * x[r];
        w += std::abs(nd[h][r]);
      }
      double tol = w * mag + 1e-13 * (1 + std::abs(od[h]));
      if (v > tol) {
        inside = false;
        unsure = false;
        break;
      }
      if (v > -tol) unsure = true;
    }
    FieldVec star;
    if (inside || unsure) {
      star = s.project(g);
      for (int r = 0; r < s.n; ++r) star[r] += shift[r];
      if (unsure) inside = s.in_interior(star);
    }
    if (!inside) return true;
    PatternPoint p;
    p.gamma = g;
    p.star = std::move(star);
    for (int r = 0; r < d; ++r) {
      double y = 0;
      for (int j = 0; j < s.k; ++j) y += phys[r][j] * g[j];
      p.y.push_back(y);
    }
    ps.points.push_back(std::move(p));
    return true;
  });
  std::sort(ps.points.begin(), ps.points.end(),
            [](const PatternPoint& a, const PatternPoint& b) { return a.gamma < b.gamma; });
  return ps;
}

PointSet generate(const Scheme& s, long eta_max, std::uint64_t seed) {
  return generate_with_shift(s, eta_max, choose_nonsingular_shift(s.sys, seed));
}

PatchMetric patch_metric_from_name(const std::string& name) {
  if (name == "physical") return PatchMetric::physical;
  if (name == "lattice") return PatchMetric::lattice;
  throw std::invalid_argument("unknown patch metric: " + name);
}

std::vector<std::vector<long>> patch_offsets(const InternalSystem& s, const FieldMat& phys, long r, PatchMetric metric) {
  if (r < 0) throw std::invalid_argument("patch radius must be nonnegative");
  if (metric == PatchMetric::lattice) return difference_offsets(s, r);
  int d = static_cast<int>(phys.size());
  std::vector<double> half(s.n);
  for (int c = 0; c < s.n; ++c) {
    double lo = 1e300, hi = -1e300;
    for (auto& v : s.vertices) {
      lo = std::min(lo, v[c].approx());
      hi = std::max(hi, v[c].approx());
    }
    half[c] = (hi - lo) * (1 + 1e-9) + 1e-9;
  }
  FieldMat rows = phys;
  rows.insert(rows.end(), s.proj.begin(), s.proj.end());
  auto m = DoubleModel::make(rows, s.k);
  double rd = static_cast<double>(r), r2 = rd * rd;
  FE r2e(s.field, Rat(r * r));
  RegionFn region = [&](const std::vector<long>&, long, const std::vector<double>&, std::vector<double>& c,
                        std::vector<double>& h) {
    for (int i = 0; i < d + s.n; ++i) {
      c[i] = 0;
      h[i] = i < d ? rd * (1 + 1e-12) + 1e-12 : half[i - d];
    }
    return true;
  };
  std::vector<std::vector<long>> out;
  pivot_enumerate(m, std::numeric_limits<long>::max() / 4, region, [&](const std::vector<long>& g) {
    for (int i = 0; i < s.n; ++i)
      if (std::abs(m.coord(g, d + i)) > half[i] + m.err(g, d + i)) return true;
    double q = 0, e = 0;
    for (int i = 0; i < d; ++i) {
      double c = m.coord(g, i), er = m.err(g, i);
      q += c * c;
      e += 2 * std::abs(c) * er + er * er;
    }
    e += 1e-14 * q;
    if (q - e > r2) return true;
    if (q + e >= r2) {
      FE norm(s.field, Rat(0));
      for (int i = 0; i < d; ++i) {
        FE y(s.field, Rat(0));
        for (int j = 0; j < s.k; ++j)
          if (g[j] != 0) y += phys[i][j].scaled(Rat(g[j]));
        norm += y * y;
      }
      if (cmp(norm, r2e) > 0) return true;
    }
    out.push_back(g);
    return true;
  });
  std::sort(out.begin(), out.end());
  return out;
}

Census patch_census(const PointSet& ps, long r, PatchMetric metric) {
  auto offs = patch_offsets(ps.sys, ps.phys, r, metric);
  Census c;
  c.r = r;
  c.metric = metric;
  for (auto& o : offs) c.reach = std::max(c.reach, linf(o));
  if (ps.eta_max - c.reach < 0) throw std::range_error("WINDOW_TOO_SMALL: patch radius exceeds the enumeration box");
  std::unordered_map<std::vector<long>, int, VecHash> where;
  for (size_t i = 0; i < ps.points.size(); ++i) where.emplace(ps.points[i].gamma, static_cast<int>(i));
  std::map<std::vector<int>, size_t> index;
  std::vector<long> q(ps.sys.k);
  for (size_t i = 0; i < ps.points.size(); ++i) {
    const auto& g = ps.points[i].gamma;
    if (linf(g) > ps.eta_max - c.reach) continue;
    ++c.centers;
    std::vector<int> key;
    for (size_t o = 0; o < offs.size(); ++o) {
      for (int j = 0; j < ps.sys.k; ++j) q[j] = g[j] + offs[o][j];
      if (where.count(q)) key.push_back(static_cast<int>(o));
    }
    auto it = index.find(key);
    if (it == index.end()) {
      PatchClass pc;
      for (int o : key) pc.members.push_back(offs[o]);
      it = index.emplace(key, c.classes.size()).first;
      c.classes.push_back(std::move(pc));
    }
    c.classes[it->second].centers.push_back(static_cast<int>(i));
  }
  if (c.centers == 0) throw std::range_error("WINDOW_TOO_SMALL: no census centers");
  return c;
}

Repetitivity repetitivity(const PointSet& ps, const Census& c) {
  Repetitivity rep;
  rep.r = c.r;
  long inner = (ps.eta_max - c.reach) / 2;
  bool phys = c.metric == PatchMetric::physical;
  int k = ps.sys.k;
  auto key = [&](int i) { return phys ? ps.points[i].y[0] : static_cast<double>(ps.points[i].gamma[0]); };
  auto dist = [&](int a, int b) {
    double d = 0;
    if (phys) {
      for (size_t t = 0; t < ps.points[a].y.size(); ++t) {
        double u = ps.points[a].y[t] - ps.points[b].y[t];
        d += u * u;
      }
      return std::sqrt(d);
    }
    for (int t = 0; t < k; ++t)
      d = std::max(d, static_cast<double>(std::abs(ps.points[a].gamma[t] - ps.points[b].gamma[t])));
    return d;
  };
  // Occurrences of each class sorted by the first coordinate, for pruned nearest search.
  std::vector<std::vector<std::pair<double, int>>> occ(c.classes.size());
  for (size_t p = 0; p < c.classes.size(); ++p) {
    for (int i : c.classes[p].centers) occ[p].push_back({key(i), i});
    std::sort(occ[p].begin(), occ[p].end());
  }
  for (auto& cls : c.classes)
    for (int i : cls.centers) {
      if (linf(ps.points[i].gamma) > inner) continue;
      ++rep.probes;
      double x = key(i);
      for (auto& o : occ) {
        double best = std::numeric_limits<double>::infinity();
        auto mid = std::lower_bound(o.begin(), o.end(), std::make_pair(x, -1)) - o.begin();
        for (long j = mid; j < static_cast<long>(o.size()) && o[j].first - x < best; ++j)
          best = std::min(best, dist(o[j].second, i));
        for (long j = mid - 1; j >= 0 && x - o[j].first < best; --j)
          best = std::min(best, dist(o[j].second, i));
        if (std::isfinite(best)) rep.rho_hat = std::max(rep.rho_hat, best);
      }
    }
  if (rep.probes == 0) throw std::range_error("WINDOW_TOO_SMALL: no probe points for repetitivity");
  return rep;
}

Repetitivity repetitivity(const PointSet& ps, long r, PatchMetric m) { return repetitivity(ps, patch_census(ps, r, m)); }

PatchDomains patch_domains(const InternalSystem& s, const FieldMat& phys, long r, PatchMetric m) {
  auto offs = patch_offsets(s, phys, r, m);
  PatchDomains pd;
  for (auto& o : offs) pd.cut_radius = std::max(pd.cut_radius, linf(o));
  pd.domains = acceptance_domains(s, cut_regions(s, pd.cut_radius), offs);
  return pd;
}

FrequencyTable frequency_check(const PointSet& ps, long r, PatchMetric m) {
  auto census = patch_census(ps, r, m);
  auto pd = patch_domains(ps.sys, ps.phys, r, m);
  std::map<std::vector<std::vector<long>>, FrequencyRow> rows;
  for (auto& d : pd.domains) {
    auto& row = rows[d.members];
    row.members = d.members;
    row.exact = d.frequency.approx();
  }
  FrequencyTable t;
  for (auto& pc : census.classes) {
    auto& row = rows[pc.members];
    row.members = pc.members;
    row.empirical = static_cast<double>(pc.centers.size()) / static_cast<double>(census.centers);
    t.empirical_sum += row.empirical;
  }
  for (auto& [key, row] : rows) {
    t.max_deviation = std::max(t.max_deviation, std::abs(row.empirical - row.exact));
    t.rows.push_back(row);
  }
  return t;
}

void write_points_csv(std::ostream& os, const PointSet& ps) {
  int k = ps.sys.k;
  size_t d = ps.points.empty() ? 0 : ps.points[0].y.size();
  for (int j = 0; j < k; ++j) os << "g" << j << ",";
  for (size_t r = 0; r < d; ++r) os << "y" << r << ",";
  for (int r = 0; r < ps.sys.n; ++r) os << "star" << r << (r + 1 < ps.sys.n ? "," : "\n");
  os.precision(17);
  for (auto& p : ps.points) {
    for (long x : p.gamma) os << x << ",";
    for (double y : p.y) os << y << ",";
    for (int r = 0; r < ps.sys.n; ++r) os << p.star[r].approx() << (r + 1 < ps.sys.n ? "," : "\n");
  }
}

void write_points_svg(std::ostream& os, const PointSet& ps) {
  double lo[2] = {1e300, 1e300}, hi[2] = {-1e300, -1e300};
  for (auto& p : ps.points)
    for (size_t i = 0; i < 2 && i < p.y.size(); ++i) {
      lo[i] = std::min(lo[i], p.y[i]);
      hi[i] = std::max(hi[i], p.y[i]);
    }
  bool line = !ps.points.empty() && ps.points[0].y.size() == 1;
  if (line) {
    lo[1] = -1;
    hi[1] = 1;
  }
  double w = 800, scale = ps.points.empty() ? 1 : w / std::max(hi[0] - lo[0], hi[1] - lo[1]);
  double H = line ? 40 : (hi[1] - lo[1]) * scale;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w + 20 << "\" height=\"" << H + 20 << "\">\n";
  for (auto& p : ps.points) {
    double x = 10 + (p.y[0] - lo[0]) * scale, y = line ? 30 : 10 + (hi[1] - p.y[1]) * scale;
    os << "<circle cx=\"" << x << "\" cy=\"" << y << "\" r=\"1.5\"/>\n";
  }
  os << "</svg>\n";
}

}  // namespace cutproj
