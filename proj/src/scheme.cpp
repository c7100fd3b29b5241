#include "cutproj/scheme.hpp"

#include <map>
#include <random>
#include <set>

#include "cutproj/linalg.hpp"
#include "cutproj/util.hpp"

namespace cutproj {

std::string code_name(ValidationCode c) {
  switch (c) {
    case ValidationCode::MALFORMED: return "MALFORMED";
    case ValidationCode::PERIODIC: return "PERIODIC";
    case ValidationCode::NOT_DENSE: return "NOT_DENSE";
    case ValidationCode::PHYSICAL_NOT_INJECTIVE: return "PHYSICAL_NOT_INJECTIVE";
    case ValidationCode::UNBOUNDED_WINDOW: return "UNBOUNDED_WINDOW";
    case ValidationCode::REDUNDANT_HALFSPACE: return "REDUNDANT_HALFSPACE";
    case ValidationCode::DEGENERATE_WINDOW: return "DEGENERATE_WINDOW";
  }
  return "UNKNOWN";
}

ValidationFailure::ValidationFailure(ValidationCode code, const std::string& msg, int index)
    : std::runtime_error(code_name(code) + (index >= 0 ? "(" + std::to_string(index) + ")" : "") + ": " + msg),
      code_(code),
      index_(index) {}

std::string tri_name(Tri t) {
  switch (t) {
    case Tri::yes: return "yes";
    case Tri::no: return "no";
    case Tri::unknown: return "unknown";
  }
  return "unknown";
}

FieldVec InternalSystem::project(const std::vector<long>& g) const {
  FieldVec x(n, FE(field, Rat(0)));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < k; ++j)
      if (g[j] != 0) x[i] += proj[i][j].mul_int(g[j]);
  return x;
}

bool InternalSystem::in_window(const FieldVec& x) const {
  for (const auto& h : halfspaces)
    if (cmp(dot(h.normal, x), h.offset) > 0) return false;
  return true;
}

bool InternalSystem::in_interior(const FieldVec& x) const {
  for (const auto& h : halfspaces)
    if (cmp(dot(h.normal, x), h.offset) >= 0) return false;
  return true;
}

namespace {

bool proportional(const FieldVec& a, const FieldVec& b) { return rank(FieldMat{a, b}) == 1; }

// Positive lambda with b = lambda a, if any.
std::optional<FE> positive_ratio(const FieldVec& a, const FieldVec& b) {
  if (!proportional(a, b)) return std::nullopt;
  for (size_t i = 0; i < a.size(); ++i)
    if (!a[i].is_zero()) {
      FE lam = b[i] / a[i];
      if (lam.sign() > 0) return lam;
      return std::nullopt;
    }
  return std::nullopt;
}

}  // namespace

InternalSystem make_internal(FieldPtr field, int k, int n, FieldMat proj, std::vector<HalfSpace> hs) {
  InternalSystem s;
  s.field = field;
  s.k = k;
  s.n = n;
  s.proj = std::move(proj);
  s.halfspaces = std::move(hs);
  if (n < 1 || k < n) throw ValidationFailure(ValidationCode::MALFORMED, "need 1 <= n <= k");
  if (static_cast<int>(s.proj.size()) != n) throw ValidationFailure(ValidationCode::MALFORMED, "proj_internal must have n rows");
  for (auto& r : s.proj)
    if (static_cast<int>(r.size()) != k) throw ValidationFailure(ValidationCode::MALFORMED, "proj_internal must have k columns");
  int m = static_cast<int>(s.halfspaces.size());
  for (int i = 0; i < m; ++i) {
    const auto& h = s.halfspaces[i];
    if (static_cast<int>(h.normal.size()) != n)
      throw ValidationFailure(ValidationCode::MALFORMED, "half-space normal has wrong length", i);
    bool nz = false;
    for (auto& x : h.normal) nz = nz || !x.is_zero();
    if (!nz) throw ValidationFailure(ValidationCode::MALFORMED, "zero normal", i);
  }

  FieldMat normals;
  for (auto& h : s.halfspaces) normals.push_back(h.normal);
  if (normals.empty() || rank(normals) < n)
    throw ValidationFailure(ValidationCode::UNBOUNDED_WINDOW, "normals do not span the internal space");

  for (int i = 0; i < m; ++i)
    for (int j = 0; j < i; ++j) {
      auto lam = positive_ratio(s.halfspaces[j].normal, s.halfspaces[i].normal);
      if (lam && s.halfspaces[i].offset == *lam * s.halfspaces[j].offset)
        throw ValidationFailure(ValidationCode::REDUNDANT_HALFSPACE, "duplicate of half-space " + std::to_string(j), i);
    }

  // Vertices: feasible intersections of n independent boundary hyperplanes.
  std::set<std::string> seen;
  for_each_subset(m, n, [&](const std::vector<int>& sub) {
    FieldMat a;
    FieldVec b;
    for (int i : sub) {
      a.push_back(s.halfspaces[i].normal);
      b.push_back(s.halfspaces[i].offset);
    }
    auto inv = inverse(a);
    if (!inv) return;
    FieldVec x = mat_vec(*inv, b);
    if (!s.in_window(x)) return;
    if (seen.insert(vec_key(x)).second) s.vertices.push_back(x);
  });
  if (s.vertices.empty()) throw ValidationFailure(ValidationCode::DEGENERATE_WINDOW, "window is empty");

  // Recession cone {x : N x <= 0} must be trivial; test candidate extreme rays.
  bool unbounded = false;
  for_each_subset(m, n - 1, [&](const std::vector<int>& sub) {
    if (unbounded) return;
    FieldMat a;
    for (int i : sub) a.push_back(s.halfspaces[i].normal);
    auto ker = a.empty() ? std::vector<FieldVec>{} : nullspace(a, n);
    if (a.empty()) {
      FieldVec e(n, FE(field, Rat(0)));
      e[0] = FE(field, Rat(1));
      ker.push_back(e);
    }
    if (ker.size() != 1) return;
    for (int sgn : {1, -1}) {
      bool ray = true;
      for (const auto& h : s.halfspaces) {
        FE v = dot(h.normal, ker[0]).mul_int(sgn);
        if (v.sign() > 0) {
          ray = false;
          break;
        }
      }
      if (ray) unbounded = true;
    }
  });
  if (unbounded) throw ValidationFailure(ValidationCode::UNBOUNDED_WINDOW, "window has a recession direction");

  if (affine_rank(s.vertices) < n)
    throw ValidationFailure(ValidationCode::DEGENERATE_WINDOW, "window is not full-dimensional");

  for (int i = 0; i < m; ++i) {
    std::vector<FieldVec> face;
    for (auto& v : s.vertices)
      if (dot(s.halfspaces[i].normal, v) == s.halfspaces[i].offset) face.push_back(v);
    if (affine_rank(face) < n - 1)
      throw ValidationFailure(ValidationCode::REDUNDANT_HALFSPACE, "half-space does not support a facet", i);
  }

  // Parallel classes.
  s.class_of.assign(m, -1);
  for (int i = 0; i < m; ++i) {
    for (int c = 0; c < s.num_classes(); ++c)
      if (proportional(s.class_normal[c], s.halfspaces[i].normal)) {
        s.class_of[i] = c;
        s.classes[c].push_back(i);
        break;
      }
    if (s.class_of[i] < 0) {
      s.class_of[i] = s.num_classes();
      s.classes.push_back({i});
      s.class_normal.push_back(s.halfspaces[i].normal);
    }
  }

  FieldMat cols = transpose(s.proj, k);
  for (auto& h : s.halfspaces) {
    FieldVec row;
    for (int j = 0; j < k; ++j) row.push_back(dot(h.normal, cols[j]));
    s.hw.push_back(row);
  }
  for (auto& nu : s.class_normal) {
    FieldVec row;
    for (int j = 0; j < k; ++j) row.push_back(dot(nu, cols[j]));
    s.cw.push_back(row);
  }
  return s;
}

std::vector<FieldVec> window_vertices(FieldPtr field, int n, const std::vector<HalfSpace>& hs) {
  FieldMat zero(n, FieldVec(n, FE(field, Rat(0))));
  return make_internal(field, n, n, zero, hs).vertices;
}

Scheme validate(const SchemeSpec& spec) {
  if (spec.k != spec.d + spec.n || spec.d < 1 || spec.n < 1)
    throw ValidationFailure(ValidationCode::MALFORMED, "dimensions must satisfy k = d + n with d, n >= 1");
  if (static_cast<int>(spec.proj_physical.size()) != spec.d)
    throw ValidationFailure(ValidationCode::MALFORMED, "proj_physical must have d rows");
  for (auto& r : spec.proj_physical)
    if (static_cast<int>(r.size()) != spec.k)
      throw ValidationFailure(ValidationCode::MALFORMED, "proj_physical must have k columns");
  if (static_cast<int>(spec.proj_internal.size()) != spec.n)
    throw ValidationFailure(ValidationCode::MALFORMED, "proj_internal must have n rows");
  for (auto& r : spec.proj_internal)
    if (static_cast<int>(r.size()) != spec.k)
      throw ValidationFailure(ValidationCode::MALFORMED, "proj_internal must have k columns");

  FieldMat total = spec.proj_physical;
  for (auto& r : spec.proj_internal) total.push_back(r);
  if (rank(spec.proj_internal) < spec.n)
    throw ValidationFailure(ValidationCode::MALFORMED, "proj_internal must have rank n");
  if (rank(total) < spec.k)
    throw ValidationFailure(ValidationCode::MALFORMED, "physical and internal projections are not complementary");

  if (integer_kernel(spec.proj_internal, spec.k).rank() > 0)
    throw ValidationFailure(ValidationCode::PERIODIC, "internal projection has a lattice kernel");
  if (integer_kernel(spec.proj_physical, spec.k).rank() > 0)
    throw ValidationFailure(ValidationCode::PHYSICAL_NOT_INJECTIVE, "physical projection has a lattice kernel");

  // Dense iff no nonzero integer vector lies in the row space of proj_internal,
  // i.e. no nonzero m in Z^k is orthogonal to its right kernel.
  auto ker = nullspace(spec.proj_internal, spec.k);
  if (!ker.empty() && integer_kernel(FieldMat(ker), spec.k).rank() > 0)
    throw ValidationFailure(ValidationCode::NOT_DENSE, "internal projection of the lattice is not dense");

  Scheme s;
  s.spec = spec;
  s.sys = make_internal(spec.field, spec.k, spec.n, spec.proj_internal, spec.halfspaces);
  if (spec.window_shift && static_cast<int>(spec.window_shift->size()) != spec.n)
    throw ValidationFailure(ValidationCode::MALFORMED, "window shift must have length n");
  return s;
}

namespace {

// Rational system data for the homogeneity questions.
struct HomSystem {
  int deg = 0;
  RatMat L;                 // rows m*deg, cols n*deg
  std::vector<RatMat> G;    // per half-space, deg x k
  std::vector<Rat> b;       // m*deg
};

HomSystem build_hom_system(const InternalSystem& s) {
  HomSystem h;
  h.deg = s.field->degree();
  int m = static_cast<int>(s.halfspaces.size());
  FE th = FE::theta(s.field);
  std::vector<FE> pw{FE(s.field, Rat(1))};
  for (int t = 1; t < h.deg; ++t) pw.push_back(pw.back() * th);
  for (int hi = 0; hi < m; ++hi) {
    const auto& hs = s.halfspaces[hi];
    FieldVec lcols;
    for (int i = 0; i < s.n; ++i)
      for (int t = 0; t < h.deg; ++t) lcols.push_back(hs.normal[i] * pw[t]);
    RatMat lsplit = rational_split(lcols, h.deg);
    for (auto& r : lsplit) h.L.push_back(r);
    h.G.push_back(rational_split(s.hw[hi], h.deg));
    auto bs = rational_split({hs.offset}, h.deg);
    for (int t = 0; t < h.deg; ++t) h.b.push_back(bs[t][0]);
  }
  return h;
}

}  // namespace

WeakHomogeneity weakly_homogeneous(const InternalSystem& s) {
  HomSystem h = build_hom_system(s);
  int m = static_cast<int>(s.halfspaces.size());
  int rows = m * h.deg, ucols = s.n * h.deg, zcols = m * s.k;
  // Block-diagonal G.
  RatMat G(rows, std::vector<Rat>(zcols, Rat(0)));
  for (int hi = 0; hi < m; ++hi)
    for (int t = 0; t < h.deg; ++t)
      for (int j = 0; j < s.k; ++j) G[hi * h.deg + t][hi * s.k + j] = h.G[hi][t][j];

  RatMat Lt = transpose(h.L, ucols);
  auto Q = nullspace(Lt, rows);  // rows y with y^T L = 0
  WeakHomogeneity out;
  std::vector<Rat> z(zcols, Rat(0));
  long N = 1;
  if (!Q.empty()) {
    RatMat sys;
    for (auto& y : Q) {
      std::vector<Rat> row;
      row.push_back(-dot(y, h.b));
      for (int c = 0; c < zcols; ++c) {
        Rat v = 0;
        for (int r = 0; r < rows; ++r)
          if (y[r] != 0 && G[r][c] != 0) v += y[r] * G[r][c];
        row.push_back(v);
      }
      sys.push_back(row);
    }
    Subgroup ker = integer_kernel(sys, 1 + zcols);
    if (ker.rank() == 0 || ker.hnf_basis()[0][0] == 0) return out;
    const IntVec& first = ker.hnf_basis()[0];
    if (!first[0].fits_slong_p()) return out;
    N = first[0].get_si();
    for (int c = 0; c < zcols; ++c) z[c] = Rat(first[1 + c]) / N;
  }
  std::vector<Rat> rhs = h.b;
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < zcols; ++c)
      if (G[r][c] != 0 && z[c] != 0) rhs[r] -= G[r][c] * z[c];
  auto u = solve(h.L, rhs, ucols);
  if (!u) throw std::logic_error("homogeneity: inconsistent elimination");
  out.yes = true;
  out.N = N;
  for (int i = 0; i < s.n; ++i) {
    std::vector<Rat> c(h.deg);
    for (int t = 0; t < h.deg; ++t) c[t] = (*u)[i * h.deg + t];
    out.origin.push_back(FE(s.field, c));
  }
  return out;
}

Homogeneity homogeneous(const InternalSystem& s) {
  Homogeneity h;
  auto w = weakly_homogeneous(s);
  h.origin = w.origin;
  h.N = w.N;
  h.result = (w.yes && w.N == 1) ? Tri::yes : Tri::no;
  return h;
}

bool is_nonsingular_shift(const InternalSystem& s, const FieldVec& shift) {
  int deg = s.field->degree();
  for (size_t hi = 0; hi < s.halfspaces.size(); ++hi) {
    const auto& h = s.halfspaces[hi];
    FE v = h.offset - dot(h.normal, shift);
    RatMat cols = rational_split(s.hw[hi], deg);
    auto vs = rational_split({v}, deg);
    Int den = 1;
    for (auto& r : cols)
      for (auto& q : r) den = lcm(den, Int(q.get_den()));
    for (auto& r : vs) den = lcm(den, Int(r[0].get_den()));
    IntMat gens;
    for (int j = 0; j < s.k; ++j) {
      IntVec g;
      for (int t = 0; t < deg; ++t) g.push_back(Int(cols[t][j] * den));
      gens.push_back(g);
    }
    IntVec target;
    for (int t = 0; t < deg; ++t) target.push_back(Int(vs[t][0] * den));
    if (Subgroup(deg, gens).contains(target)) return false;
  }
  return true;
}

FieldVec choose_nonsingular_shift(const InternalSystem& s, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<long> dist(1, (1L << 20) - 1);
  for (int attempt = 0; attempt < 256; ++attempt) {
    FieldVec shift;
    for (int i = 0; i < s.n; ++i) {
      Rat q(Int(dist(rng)), Int(1L << 22));
      q.canonicalize();
      shift.push_back(FE(s.field, q));
    }
    if (is_nonsingular_shift(s, shift)) return shift;
  }
  throw std::runtime_error("SINGULAR_HIT: no nonsingular shift found");
}

}  // namespace cutproj
