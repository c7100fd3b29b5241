#include "cutproj/decompose.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <set>
#include <stdexcept>

#include "cutproj/complexity.hpp"
#include "cutproj/linalg.hpp"
#include "cutproj/util.hpp"

namespace cutproj {

namespace {

int find(std::vector<int>& p, int x) {
  while (p[x] != x) x = p[x] = p[p[x]];
  return x;
}

FieldMat intersection_basis(const InternalSystem& s, const std::vector<int>& classes) {
  if (classes.empty()) {
    FieldMat id(s.n, FieldVec(s.n, FE(s.field, Rat(0))));
    for (int i = 0; i < s.n; ++i) id[i][i] = FE(s.field, Rat(1));
    return id;
  }
  FieldMat a;
  for (int c : classes) a.push_back(s.class_normal[c]);
  return nullspace(a, s.n);
}

std::vector<int> complement(int m, const std::vector<int>& part) {
  std::vector<int> out;
  for (int c = 0; c < m; ++c)
    if (std::find(part.begin(), part.end(), c) == part.end()) out.push_back(c);
  return out;
}

// Subspaces X_i for the blocks complementary and each of positive dimension.
bool complementary(const InternalSystem& s, const std::vector<std::vector<int>>& blocks) {
  FieldMat all;
  for (auto& b : blocks) {
    auto x = intersection_basis(s, complement(s.num_classes(), b));
    if (x.empty()) return false;
    for (auto& v : x) all.push_back(v);
  }
  return static_cast<int>(all.size()) == s.n && rank(all) == s.n;
}

}  // namespace

FlagGraph flag_graph(const InternalSystem& s) {
  FlagGraph g;
  int m = s.num_classes();
  g.nodes = m;
  std::set<std::pair<int, int>> edges;
  for_each_subset(m, s.n - 1, [&](const std::vector<int>& pre) {
    std::vector<int> ends;
    for (int v = 0; v < m; ++v) {
      if (std::find(pre.begin(), pre.end(), v) != pre.end()) continue;
      auto f = pre;
      f.push_back(v);
      if (is_flag(s, f)) ends.push_back(v);
    }
    for (size_t i = 0; i < ends.size(); ++i)
      for (size_t j = i + 1; j < ends.size(); ++j) edges.insert({ends[i], ends[j]});
  });
  g.edges.assign(edges.begin(), edges.end());
  std::vector<int> p(m);
  std::iota(p.begin(), p.end(), 0);
  for (auto& [a, b] : g.edges) p[find(p, a)] = find(p, b);
  g.component.assign(m, -1);
  std::vector<int> id(m, -1);
  for (int c = 0; c < m; ++c) {
    int r = find(p, c);
    if (id[r] < 0) id[r] = g.num_components++;
    g.component[c] = id[r];
  }
  return g;
}

Decomposition decompose(const InternalSystem& s) {
  FlagGraph g = flag_graph(s);
  Decomposition dec;
  int m = s.num_classes();
  std::vector<std::vector<int>> blocks(g.num_components);
  for (int c = 0; c < m; ++c) blocks[g.component[c]].push_back(c);
  dec.indecomposable = blocks.size() == 1;
  if (!dec.indecomposable && !complementary(s, blocks))
    throw std::logic_error("INCONSISTENT_DECOMP: factor subspaces are not complementary");

  std::vector<Subgroup> lattices;
  for (auto& b : blocks) {
    Factor f;
    f.classes = b;
    f.co_classes = complement(m, b);
    f.basis = intersection_basis(s, f.co_classes);
    f.n = static_cast<int>(f.basis.size());
    f.lattice = stabiliser(s, f.co_classes);
    f.k = f.lattice.rank();
    f.d = f.k - f.n;
    f.delta = Rat(f.d, f.n);
    f.delta.canonicalize();
    for (int c : b)
      for (int h : s.classes[c]) {
        FieldVec nu;
        for (auto& bv : f.basis) nu.push_back(dot(s.halfspaces[h].normal, bv));
        f.window.push_back({nu, s.halfspaces[h].offset});
      }
    lattices.push_back(f.lattice);
    dec.parts.push_back(std::move(f));
  }
  dec.index_N = index_in_ambient(subgroup_sum(lattices));
  if (dec.index_N) {
    for (int i = 0; i < static_cast<int>(dec.parts.size()); ++i) {
      Subsystem sub = subsystem(s, dec, i);
      std::set<int> ranks;
      for (int c = 0; c < sub.sys.num_classes(); ++c) ranks.insert(stabiliser(sub.sys, {c}).rank());
      dec.parts[i].constant_rank = ranks.size() == 1;
      if (dec.parts[i].constant_rank) dec.parts[i].rank = *ranks.begin();
    }
  }
  return dec;
}

Subsystem subsystem(const InternalSystem& s, const Decomposition& dec, int i) {
  if (!dec.index_N) throw std::domain_error("INFINITE_INDEX: factor lattices do not have finite index");
  const Factor& f = dec.parts.at(i);
  Subsystem sub;
  sub.id = i;
  sub.lattice = f.lattice;
  sub.basis = f.basis;
  sub.delta = f.delta;
  sub.N = *dec.index_N;
  FieldMat bcols = transpose(f.basis, s.n);  // n x n_i
  FieldMat proj(f.n, FieldVec(f.k, FE(s.field, Rat(0))));
  for (int j = 0; j < f.k; ++j) {
    std::vector<long> g;
    for (auto& x : f.lattice.hnf_basis()[j]) g.push_back(x.get_si());
    auto y = solve(bcols, s.project(g), f.n);
    if (!y) throw std::logic_error("INCONSISTENT_DECOMP: lattice factor leaves its subspace");
    for (int r = 0; r < f.n; ++r) proj[r][j] = (*y)[r];
  }
  sub.sys = make_internal(s.field, f.k, f.n, proj, f.window);
  return sub;
}

bool minkowski_vertices_match(const InternalSystem& s, const Decomposition& dec) {
  std::vector<FieldVec> sums{FieldVec(s.n, FE(s.field, Rat(0)))};
  for (auto& f : dec.parts) {
    std::vector<FieldVec> next;
    for (auto& base : sums)
      for (auto& y : window_vertices(s.field, f.n, f.window)) {
        FieldVec x = base;
        for (int r = 0; r < f.n; ++r)
          for (int c = 0; c < s.n; ++c) x[c] += y[r] * f.basis[r][c];
        next.push_back(x);
      }
    sums = std::move(next);
  }
  std::set<std::string> a, b;
  for (auto& v : sums) a.insert(vec_key(v));
  for (auto& v : s.vertices) b.insert(vec_key(v));
  return a == b && sums.size() == a.size();
}

std::optional<std::vector<std::vector<int>>> finest_decomposition_bruteforce(const InternalSystem& s) {
  int m = s.num_classes();
  std::vector<std::vector<std::vector<int>>> valid;
  std::vector<int> assign(m, 0);
  // Restricted growth strings enumerate set partitions.
  std::function<void(int, int)> rec = [&](int i, int used) {
    if (i == m) {
      std::vector<std::vector<int>> blocks(used);
      for (int c = 0; c < m; ++c) blocks[assign[c]].push_back(c);
      if (used == 1 || complementary(s, blocks)) valid.push_back(blocks);
      return;
    }
    for (int b = 0; b <= used; ++b) {
      assign[i] = b;
      rec(i + 1, std::max(used, b + 1));
    }
  };
  rec(0, 0);
  size_t best = 0;
  for (auto& v : valid) best = std::max(best, v.size());
  std::set<std::vector<std::vector<int>>> finest;
  for (auto& v : valid)
    if (v.size() == best) finest.insert(v);
  if (finest.size() != 1) return std::nullopt;
  // Every valid decomposition must be coarser than the finest one.
  const auto& fin = *finest.begin();
  for (auto& v : valid)
    for (auto& blk : fin) {
      bool inside = false;
      for (auto& coarse : v)
        if (std::includes(coarse.begin(), coarse.end(), blk.begin(), blk.end())) inside = true;
      if (!inside) return std::nullopt;
    }
  return fin;
}

bool verify_decomposition_bruteforce(const InternalSystem& s) {
  auto fin = finest_decomposition_bruteforce(s);
  if (!fin) return false;
  FlagGraph g = flag_graph(s);
  std::vector<std::vector<int>> blocks(g.num_components);
  for (int c = 0; c < g.nodes; ++c) blocks[g.component[c]].push_back(c);
  std::sort(blocks.begin(), blocks.end());
  auto f = *fin;
  std::sort(f.begin(), f.end());
  return f == blocks;
}

VertexGroup vertex_group(const InternalSystem& s, const std::vector<int>& flag, const WeakHomogeneity& w) {
  if (!w.yes) throw std::domain_error("NOT_WEAKLY_HOMOGENEOUS: vertex group needs a weakly homogeneous window");
  if (!is_flag(s, flag)) throw std::invalid_argument("vertex_group: not a flag");
  int deg = s.field->degree();
  FieldMat nf;
  for (int c : flag) nf.push_back(s.class_normal[c]);
  FieldMat inv = *inverse(nf);
  // Generators N_f^{-1}(<nu_i, (e_j)_<> e_i), split into rational coordinates.
  RatMat gens;
  for (int i = 0; i < s.n; ++i)
    for (int j = 0; j < s.k; ++j) {
      FieldVec v(s.n);
      for (int r = 0; r < s.n; ++r) v[r] = inv[r][i] * s.cw[flag[i]][j];
      RatMat sp = rational_split(v, deg);  // deg x n
      std::vector<Rat> row;
      for (int r = 0; r < s.n; ++r)
        for (int t = 0; t < deg; ++t) row.push_back(sp[t][r]);
      gens.push_back(row);
    }
  RatMat lat;
  for (int j = 0; j < s.k; ++j) {
    FieldVec v(s.n);
    for (int r = 0; r < s.n; ++r) v[r] = s.proj[r][j];
    RatMat sp = rational_split(v, deg);
    std::vector<Rat> row;
    for (int r = 0; r < s.n; ++r)
      for (int t = 0; t < deg; ++t) row.push_back(sp[t][r]);
    lat.push_back(row);
  }
  int amb = s.n * deg;
  VertexGroup out;
  out.rank = rank(gens);
  if (out.rank != s.k) return out;

  Int den = 1;
  for (auto* m : {&gens, &lat})
    for (auto& r : *m)
      for (auto& q : r) den = lcm(den, Int(q.get_den()));
  auto scale = [&](const RatMat& m) {
    IntMat out;
    for (auto& r : m) {
      IntVec v;
      for (auto& q : r) v.push_back(Int(q * den));
      out.push_back(v);
    }
    return out;
  };
  Subgroup V(amb, scale(gens)), G(amb, scale(lat));
  // Index: |det| of the coordinates of a Gamma_< basis in a V basis.
  RatMat coords;
  for (auto& b : G.hnf_basis()) {
    auto c = coordinates_in(V, b);
    if (!c) throw std::logic_error("vertex_group: lattice not contained in vertex group");
    std::vector<Rat> row;
    for (auto& x : *c) row.push_back(Rat(x));
    coords.push_back(row);
  }
  // Determinant by elimination.
  Rat det = 1;
  {
    Mat<Rat> m = coords;
    int n = static_cast<int>(m.size());
    for (int c = 0; c < n; ++c) {
      int p = -1;
      for (int r = c; r < n; ++r)
        if (m[r][c] != 0) {
          p = r;
          break;
        }
      if (p < 0) {
        det = 0;
        break;
      }
      if (p != c) {
        std::swap(m[p], m[c]);
        det = -det;
      }
      det *= m[c][c];
      for (int r = c + 1; r < n; ++r) {
        if (m[r][c] == 0) continue;
        Rat f = m[r][c] / m[c][c];
        for (int j = c; j < n; ++j) m[r][j] -= f * m[c][j];
      }
    }
  }
  out.index_over_lattice = Int(abs(det));
  // M: lcm over generators of the denominators of their coordinates in Gamma_<.
  RatMat gb;
  for (auto& b : G.hnf_basis()) {
    std::vector<Rat> row;
    for (auto& x : b) row.push_back(Rat(x));
    gb.push_back(row);
  }
  RatMat gbt = transpose(gb, amb);
  Int M = 1;
  for (auto& b : V.hnf_basis()) {
    std::vector<Rat> v;
    for (auto& x : b) v.push_back(Rat(x));
    auto c = solve(gbt, v, s.k);
    if (!c) throw std::logic_error("vertex_group: vertex group leaves the span of the lattice");
    for (auto& q : *c) M = lcm(M, Int(q.get_den()));
  }
  out.M = M;
  return out;
}

}  // namespace cutproj
