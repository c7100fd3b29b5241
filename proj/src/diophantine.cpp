#include "cutproj/diophantine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>
#include <stdexcept>

#include "cutproj/complexity.hpp"
#include "cutproj/decompose.hpp"
#include "cutproj/lattice_enum.hpp"

namespace cutproj {

std::string dverdict_name(DVerdict v) {
  switch (v) {
    case DVerdict::CERTIFIED_D: return "CERTIFIED_D";
    case DVerdict::LIKELY_D: return "LIKELY_D";
    case DVerdict::INCONCLUSIVE: return "INCONCLUSIVE";
    case DVerdict::LIKELY_NOT_D: return "LIKELY_NOT_D";
  }
  return "?";
}

std::string CFCertificate::str() const {
  std::ostringstream os;
  os << "[";
  for (size_t i = 0; i < preperiod.size(); ++i) os << (i ? ", " : "") << preperiod[i].get_str();
  os << (preperiod.empty() ? "" : "; ") << "(";
  for (size_t i = 0; i < period.size(); ++i) os << (i ? ", " : "") << period[i].get_str();
  os << ")] bound " << bound.get_str();
  return os.str();
}

namespace {

constexpr size_t kMaxCfSteps = 200000;

// theta = (-b + sgn * sqrt(disc)) / 2 for min poly t^2 + b t + c.
struct QuadData {
  Rat b, c, disc;
  int sgn = 1;
};

QuadData quad_data(const FieldPtr& f) {
  QuadData q;
  const auto& p = f->min_poly();
  q.c = p[0];
  q.b = p[1];
  q.disc = q.b * q.b - 4 * q.c;
  q.sgn = FE::theta(f).approx() > -q.b.get_d() / 2 ? 1 : -1;
  return q;
}

Int fdiv(const Int& a, const Int& b) {
  Int r;
  mpz_fdiv_q(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return r;
}

Int isqrt(const Int& a) {
  Int r;
  mpz_sqrt(r.get_mpz_t(), a.get_mpz_t());
  return r;
}

Int lcm(const Int& a, const Int& b) {
  Int r;
  mpz_lcm(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return r;
}

bool rational_sqrt(const Rat& q, Rat& out) {
  if (q < 0) return false;
  if (!mpz_perfect_square_p(q.get_num_mpz_t()) || !mpz_perfect_square_p(q.get_den_mpz_t())) return false;
  out = Rat(isqrt(q.get_num()), isqrt(q.get_den()));
  out.canonicalize();
  return true;
}

}  // namespace

CFCertificate cf_expand(const FE& x) {
  if (x.is_rational()) throw std::domain_error("RATIONAL_INPUT: continued fraction of a rational number");
  const auto& f = x.field();
  if (!f || f->degree() != 2) throw std::domain_error("NOT_QUADRATIC: value is not in a quadratic field");
  auto q = quad_data(f);
  Rat a0 = x.coeff(0), a1 = x.degree() > 1 ? x.coeff(1) : Rat(0);
  // x = u + w sqrt(disc)
  Rat u = a0 - a1 * q.b / 2;
  Rat w = a1 * q.sgn / 2;
  Rat z = w * w * q.disc;
  Int M = lcm(u.get_den(), z.get_den());
  Int P = u.get_num() * (M / u.get_den());
  Int Md = M / z.get_den();
  Int D = Md * Md * z.get_num() * z.get_den();
  Int Q = M;
  if (w < 0) {
    P = -P;
    Q = -Q;
  }
  Int rem = D - P * P;
  if (rem % Q != 0) {
    Int aq = abs(Q);
    P *= aq;
    D *= Q * Q;
    Q *= aq;
  }
  Int s = isqrt(D);
  if (s * s == D) throw std::logic_error("cf_expand: discriminant is a square");

  std::map<std::pair<Int, Int>, size_t> seen;
  std::vector<Int> quot;
  for (size_t step = 0; step < kMaxCfSteps; ++step) {
    auto key = std::make_pair(P, Q);
    auto it = seen.find(key);
    if (it != seen.end()) {
      CFCertificate c;
      c.value = x;
      c.preperiod.assign(quot.begin(), quot.begin() + static_cast<long>(it->second));
      c.period.assign(quot.begin() + static_cast<long>(it->second), quot.end());
      c.bound = 0;
      for (size_t i = 1; i < quot.size(); ++i) c.bound = std::max(c.bound, Int(abs(quot[i])));
      if (quot.size() == 1) c.bound = abs(quot[0]);
      return c;
    }
    seen.emplace(key, step);
    Int a = Q > 0 ? fdiv(P + s, Q) : fdiv(P + s + 1, Q);
    quot.push_back(a);
    P = a * Q - P;
    Q = (D - P * P) / Q;
  }
  throw std::runtime_error("CF_TOO_LONG: period exceeds the step limit");
}

FE cf_value(const FieldPtr& field, const CFCertificate& c) {
  if (c.period.empty()) throw std::invalid_argument("cf_value: empty period");
  if (!field || field->degree() != 2) throw std::domain_error("NOT_QUADRATIC: cf_value needs a quadratic field");
  Int p1 = 1, p0 = 0, q1 = 0, q0 = 1;
  for (const auto& b : c.period) {
    Int np1 = p1 * b + p0, nq1 = q1 * b + q0;
    p0 = p1;
    q0 = q1;
    p1 = np1;
    q1 = nq1;
  }
  // y = (p1 y + p0) / (q1 y + q0), y > 1.
  Int delta = (p1 - q0) * (p1 - q0) + 4 * p0 * q1;
  auto q = quad_data(field);
  Rat r;
  if (!rational_sqrt(Rat(delta) / q.disc, r)) throw std::domain_error("NOT_QUADRATIC: period value lies outside the field");
  FE sqrt_disc = (FE::theta(field).scaled(Rat(2)) + FE(field, q.b)).scaled(Rat(q.sgn));
  FE y = (FE(field, Rat(p1 - q0)) + sqrt_disc.scaled(r)).scaled(Rat(1) / Rat(2 * q1));
  FE v = y;
  for (size_t i = c.preperiod.size(); i-- > 0;) v = FE(field, Rat(c.preperiod[i])) + v.inverse();
  return v;
}

double loglog_slope(const std::vector<std::pair<double, double>>& pts, double* residual) {
  size_t n = pts.size();
  if (n < 2) {
    if (residual) *residual = 0;
    return 0;
  }
  std::vector<double> xs, ys;
  for (auto& [x, y] : pts) {
    xs.push_back(std::log(x));
    ys.push_back(std::log(std::max(y, 1e-300)));
  }
  double mx = 0, my = 0;
  for (size_t i = 0; i < n; ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0;
  for (size_t i = 0; i < n; ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  double slope = sxx > 0 ? sxy / sxx : 0;
  if (residual) {
    double ss = 0, lo = ys[0], hi = ys[0];
    for (size_t i = 0; i < n; ++i) {
      double e = ys[i] - (my + slope * (xs[i] - mx));
      ss += e * e;
      lo = std::min(lo, ys[i]);
      hi = std::max(hi, ys[i]);
    }
    double rms = std::sqrt(ss / n);
    *residual = hi > lo ? rms / (hi - lo) : 0;
  }
  return slope;
}

DVerdict scan_verdict(const std::vector<DioSample>& samples, const ScanOptions& opt) {
  if (samples.size() < 2) return DVerdict::INCONCLUSIVE;
  double last = samples.back().c_lower, mid = samples[samples.size() / 2].c_lower;
  if (mid > 0 && last * opt.plateau_factor >= mid) return DVerdict::LIKELY_D;
  std::vector<std::pair<double, double>> pts;
  for (auto& s : samples) pts.push_back({static_cast<double>(s.R), s.c_lower});
  double res = 0;
  double slope = loglog_slope(pts, &res);
  bool step_drop = last < 1e-3 * mid;
  if (slope <= opt.slope_threshold && (res <= opt.residual_tol || step_drop)) return DVerdict::LIKELY_NOT_D;
  return DVerdict::INCONCLUSIVE;
}

namespace {

// min over 0 < |g|_inf <= R of |g_< + offset|_inf * |g|_inf^expo, for every R in Rl.
std::vector<DioSample> scan_core(const InternalSystem& s, const std::vector<long>& Rl, double expo,
                                 const FieldVec* offset, double guard) {
  if (Rl.empty()) return {};
  for (size_t i = 0; i < Rl.size(); ++i)
    if (Rl[i] < 1 || (i && Rl[i] <= Rl[i - 1])) throw std::invalid_argument("scan: R list must be positive and increasing");
  long Rmax = Rl.back();
  int f = s.k - s.n;
  if (free_box_size(f, Rmax) > guard) {
    std::ostringstream os;
    os << "ENUMERATION_TOO_LARGE: (2R+1)^" << f << " exceeds " << guard << " at R=" << Rmax;
    throw std::length_error(os.str());
  }
  auto m = DoubleModel::make(s);
  std::vector<double> offd(s.n, 0), offe(s.n, 0);
  if (offset)
    for (int r = 0; r < s.n; ++r) {
      auto e = to_float((*offset)[r], 100);
      offd[r] = 0.5 * (e.lo + e.hi);
      offe[r] = 0.5 * (e.hi - e.lo) + std::abs(offd[r]) * 2e-16;
    }
  size_t L = Rl.size();
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> cur(L, inf), up(L, inf);
  std::vector<std::vector<long>> arg(L);
  auto idx = [&](long sh) { return static_cast<size_t>(std::lower_bound(Rl.begin(), Rl.end(), sh) - Rl.begin()); };

  auto eval = [&](const std::vector<long>& g, long sh) {
    size_t i = idx(sh);
    if (i == L) return;
    double sd = std::pow(static_cast<double>(sh), expo);
    double nlo = 0, nhi = 0;
    for (int r = 0; r < s.n; ++r) {
      double x = m.coord(g, r) + offd[r], e = m.err(g, r) + offe[r];
      nlo = std::max(nlo, std::abs(x) - e);
      nhi = std::max(nhi, std::abs(x) + e);
    }
    if (nlo * sd * (1 - 1e-12) >= cur[i]) return;
    if (nhi - nlo > 1e-6 * nhi) {
      FieldVec y = s.project(g);
      nlo = nhi = 0;
      for (int r = 0; r < s.n; ++r) {
        if (offset) y[r] += (*offset)[r];
        auto e = to_float(y[r], 160);
        double lo = e.lo > 0 ? e.lo : (e.hi < 0 ? -e.hi : 0);
        nlo = std::max(nlo, lo);
        nhi = std::max(nhi, std::max(std::abs(e.lo), std::abs(e.hi)));
      }
    }
    double vlo = std::nextafter(nlo * sd, 0.0) * (1 - 4e-15);
    double vhi = std::nextafter(nhi * sd, inf) * (1 + 4e-15);
    for (size_t j = i; j < L && vlo < cur[j]; ++j) {
      cur[j] = vlo;
      up[j] = vhi;
      arg[j] = g;
    }
  };

  std::vector<long> g(s.k, 0);
  for (int j = 0; j < s.k; ++j)
    for (long sg : {1L, -1L}) {
      g[j] = sg;
      eval(g, 1);
      g[j] = 0;
    }

  RegionFn region = [&](const std::vector<long>&, long shell, const std::vector<double>& yF, std::vector<double>& center,
                        std::vector<double>& half) {
    long s0 = std::max(shell, 1L);
    size_t i = idx(s0);
    if (i == L) return false;
    double mm = cur[i] / std::pow(static_cast<double>(s0), expo);
    for (int r = 0; r < s.n; ++r) {
      center[r] = -offd[r];
      half[r] = mm * (1 + 1e-9) + offe[r] + 1e-12 * (1 + std::abs(yF[r]));
    }
    return true;
  };
  pivot_enumerate(m, Rmax, region, [&](const std::vector<long>& gg) {
    long sh = linf(gg);
    if (sh > 0) eval(gg, sh);
    return true;
  });

  std::vector<DioSample> out;
  for (size_t i = 0; i < L; ++i) out.push_back({Rl[i], cur[i], up[i], arg[i]});
  return out;
}

Rat delta_of(const InternalSystem& s) { return Rat(s.k - s.n, s.n); }

}  // namespace

DioReport scan(const InternalSystem& sub, const std::vector<long>& R_list, const ScanOptions& opt) {
  DioReport rep;
  rep.delta = delta_of(sub);
  rep.delta.canonicalize();
  rep.samples = scan_core(sub, R_list, rep.delta.get_d(), nullptr, opt.guard);
  rep.verdict = scan_verdict(rep.samples, opt);
  return rep;
}

std::vector<long> default_R_list(const InternalSystem& sub, long r_max) {
  int f = sub.k - sub.n;
  if (r_max <= 0) r_max = f == 1 ? 2000000 : f == 2 ? 200 : f == 3 ? 40 : 12;
  std::vector<long> out;
  const int points = 8;
  for (int i = 0; i < points; ++i) {
    double t = static_cast<double>(i) / (points - 1);
    long R = std::lround(std::pow(2.0, 1 - t) * std::pow(static_cast<double>(r_max), t));
    R = std::max(R, 1L);
    if (out.empty() || R > out.back()) out.push_back(R);
  }
  if (out.back() != r_max) out.push_back(r_max);
  return out;
}

std::optional<CFCertificate> certify(const InternalSystem& sub) {
  if (!sub.field || sub.field->degree() != 2 || sub.k != 2 * sub.n) return std::nullopt;
  // An injective image of Z^{2n} in K^n is commensurable with Z[theta]^n; then the generator's
  // bounded quotients bound every coordinate.
  RatMat split;
  for (int r = 0; r < sub.n; ++r) {
    auto part = rational_split(sub.proj[r], 2);
    for (auto& row : part) split.push_back(row);
  }
  if (rank(split) != sub.k) return std::nullopt;
  return cf_expand(FE::theta(sub.field));
}

std::optional<std::string> certify_norm(const InternalSystem& sub) {
  if (!sub.field) return std::nullopt;
  int D = sub.field->degree();
  if (D < 2 || sub.k != D * sub.n) return std::nullopt;
  RatMat split;
  for (int r = 0; r < sub.n; ++r)
    for (auto& row : rational_split(sub.proj[r], D)) split.push_back(row);
  if (rank(split) != sub.k) return std::nullopt;
  // Each nonzero coordinate has conjugates O(eta) and a norm bounded away from 0.
  return "norm bound: field degree " + std::to_string(D) + ", k = " + std::to_string(D) + "n, injective rational split";
}

std::optional<CFCertificate> certify_codim1(const InternalSystem& sub) {
  if (sub.n != 1) return std::nullopt;
  return certify(sub);
}

SchemeDReport scheme_D(const InternalSystem& s, long r_max, const ScanOptions& opt) {
  SchemeDReport out;
  if (!complexity_report(s).property_C)
    out.warnings.push_back("property C does not hold; scanning the flag-graph decomposition as given");
  auto dec = decompose(s);
  out.verdict = DVerdict::CERTIFIED_D;
  for (size_t i = 0; i < dec.parts.size(); ++i) {
    auto sub = subsystem(s, dec, static_cast<int>(i));
    if (!dec.parts[i].constant_rank)
      out.warnings.push_back("factor " + std::to_string(i) + " has non-constant stabiliser rank");
    auto rep = scan(sub.sys, default_R_list(sub.sys, r_max), opt);
    rep.subsystem = static_cast<int>(i);
    if (auto c = certify(sub.sys)) {
      rep.certificate = *c;
      rep.verdict = DVerdict::CERTIFIED_D;
      rep.note = "quadratic reduction, generator expansion " + c->str();
    } else if (auto why = certify_norm(sub.sys)) {
      rep.verdict = DVerdict::CERTIFIED_D;
      rep.note = *why;
    }
    out.verdict = std::max(out.verdict, rep.verdict);
    out.parts.push_back(std::move(rep));
  }
  return out;
}

std::vector<std::pair<long, double>> transference_check(const InternalSystem& sub, const std::vector<long>& R_list,
                                                        int grid) {
  if (sub.n > 2) throw std::invalid_argument("UNSUPPORTED_DIMENSION: transference_check needs n <= 2");
  int n = sub.n;
  std::vector<std::vector<double>> verts;
  for (auto& v : sub.vertices) {
    std::vector<double> p;
    for (auto& x : v) p.push_back(x.approx());
    verts.push_back(p);
  }
  std::vector<double> half(n, 0);
  for (int r = 0; r < n; ++r) {
    double lo = verts[0][r], hi = verts[0][r];
    for (auto& v : verts) {
      lo = std::min(lo, v[r]);
      hi = std::max(hi, v[r]);
    }
    half[r] = hi - lo;
  }
  // Grid over W - W. For polygons its edge normals are the window normals and their negatives.
  std::vector<std::vector<double>> pts;
  if (grid <= 1) {
    pts.push_back(std::vector<double>(n, 0));
  } else if (n == 1) {
    for (int i = 0; i < grid; ++i) pts.push_back({-half[0] + 2 * half[0] * i / (grid - 1)});
  } else {
    std::vector<std::pair<std::vector<double>, double>> cons;
    for (auto& h : sub.halfspaces) {
      std::vector<double> nu{h.normal[0].approx(), h.normal[1].approx()};
      double hp = -1e300, hm = -1e300;
      for (auto& v : verts) {
        hp = std::max(hp, nu[0] * v[0] + nu[1] * v[1]);
        hm = std::max(hm, -nu[0] * v[0] - nu[1] * v[1]);
      }
      cons.push_back({nu, hp + hm});
    }
    for (int i = 0; i < grid; ++i)
      for (int j = 0; j < grid; ++j) {
        std::vector<double> p{-half[0] + 2 * half[0] * i / (grid - 1), -half[1] + 2 * half[1] * j / (grid - 1)};
        bool inside = true;
        for (auto& [nu, off] : cons) {
          double t = nu[0] * p[0] + nu[1] * p[1];
          double tol = 1e-12 * (1 + std::abs(off));
          if (t > off + tol || -t > off + tol) inside = false;
        }
        if (inside) pts.push_back(p);
      }
  }
  auto m = DoubleModel::make(sub);
  double B = 0;
  for (double h : half) B = std::max(B, 2 * h);
  std::vector<std::pair<long, double>> out;
  for (long R : R_list) {
    if (free_box_size(sub.k - sub.n, R) > 1e8)
      throw std::length_error("ENUMERATION_TOO_LARGE: transference box at R=" + std::to_string(R));
    std::vector<std::vector<double>> orbit;
    RegionFn region = [&](const std::vector<long>&, long, const std::vector<double>&, std::vector<double>& c,
                          std::vector<double>& h) {
      for (int r = 0; r < n; ++r) {
        c[r] = 0;
        h[r] = B;
      }
      return true;
    };
    pivot_enumerate(m, R, region, [&](const std::vector<long>& g) {
      std::vector<double> p(n);
      bool in = true;
      for (int r = 0; r < n; ++r) {
        p[r] = m.coord(g, r);
        if (std::abs(p[r]) > B) in = false;
      }
      if (in) orbit.push_back(p);
      return true;
    });
    double cover = 0;
    if (n == 1) {
      std::vector<double> xs;
      for (auto& p : orbit) xs.push_back(p[0]);
      std::sort(xs.begin(), xs.end());
      for (auto& p : pts) {
        auto it = std::lower_bound(xs.begin(), xs.end(), p[0]);
        double best = std::numeric_limits<double>::infinity();
        if (it != xs.end()) best = std::min(best, *it - p[0]);
        if (it != xs.begin()) best = std::min(best, p[0] - *(it - 1));
        cover = std::max(cover, best);
      }
    } else {
      int C = std::max(1, static_cast<int>(std::sqrt(static_cast<double>(orbit.size()))));
      double cell = 2 * B / C;
      std::vector<std::vector<int>> bucket(static_cast<size_t>(C) * C);
      auto cidx = [&](double x) { return std::clamp(static_cast<int>(std::floor((x + B) / cell)), 0, C - 1); };
      for (size_t i = 0; i < orbit.size(); ++i) bucket[cidx(orbit[i][0]) * C + cidx(orbit[i][1])].push_back(static_cast<int>(i));
      for (auto& p : pts) {
        int cx = cidx(p[0]), cy = cidx(p[1]);
        double best = std::numeric_limits<double>::infinity();
        for (int ring = 0; ring <= C; ++ring) {
          for (int x = cx - ring; x <= cx + ring; ++x)
            for (int y = cy - ring; y <= cy + ring; ++y) {
              if (std::max(std::abs(x - cx), std::abs(y - cy)) != ring) continue;
              if (x < 0 || y < 0 || x >= C || y >= C) continue;
              for (int id : bucket[x * C + y])
                best = std::min(best, std::max(std::abs(orbit[id][0] - p[0]), std::abs(orbit[id][1] - p[1])));
            }
          if (best <= ring * cell) break;
        }
        cover = std::max(cover, best);
      }
    }
    out.push_back({R, cover});
  }
  return out;
}

std::vector<DioSample> inhomogeneous_codim1(const InternalSystem& sub, const FE& beta, const std::vector<long>& R_list) {
  if (sub.n != 1) throw std::invalid_argument("inhomogeneous_codim1: needs n = 1");
  FieldVec off{beta};
  return scan_core(sub, R_list, static_cast<double>(sub.k - 1), beta.is_zero() ? nullptr : &off, 1e8);
}

}  // namespace cutproj
