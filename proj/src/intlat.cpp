#include "cutproj/intlat.hpp"

#include <sstream>
#include <stdexcept>

namespace cutproj {

namespace {

// Floor division for mpz.
Int fdiv(const Int& a, const Int& b) {
  Int q;
  mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return q;
}

void axpy_row(IntVec& dst, const Int& f, const IntVec& src) {
  if (f == 0) return;
  for (size_t j = 0; j < dst.size(); ++j)
    if (src[j] != 0) dst[j] -= f * src[j];
}

// Unimodular row reduction on the first pivot_cols columns. Returns the number of
// pivot rows; rows past it vanish on those columns. With reduce_above, entries
// above each pivot are brought into [0, pivot).
int echelon(IntMat& m, int pivot_cols, bool reduce_above) {
  int rows = static_cast<int>(m.size());
  int r = 0;
  for (int c = 0; c < pivot_cols && r < rows; ++c) {
    while (true) {
      int best = -1;
      for (int i = r; i < rows; ++i)
        if (m[i][c] != 0 && (best < 0 || abs(m[i][c]) < abs(m[best][c]))) best = i;
      if (best < 0) break;
      std::swap(m[r], m[best]);
      bool done = true;
      for (int i = r + 1; i < rows; ++i) {
        if (m[i][c] == 0) continue;
        Int q = fdiv(m[i][c], m[r][c]);
        axpy_row(m[i], q, m[r]);
        if (m[i][c] != 0) done = false;
      }
      if (done) break;
    }
    if (m[r][c] == 0) continue;
    if (m[r][c] < 0)
      for (auto& x : m[r]) x = -x;
    if (reduce_above)
      for (int i = 0; i < r; ++i) axpy_row(m[i], fdiv(m[i][c], m[r][c]), m[r]);
    ++r;
  }
  return r;
}

int pivot_of(const IntVec& row) {
  for (size_t j = 0; j < row.size(); ++j)
    if (row[j] != 0) return static_cast<int>(j);
  return -1;
}

}  // namespace

IntMat hnf(const IntMat& m) {
  if (m.empty()) return {};
  IntMat a = m;
  int cols = static_cast<int>(a[0].size());
  int r = echelon(a, cols, true);
  a.resize(r);
  return a;
}

Subgroup::Subgroup(int ambient_rank, IntMat generators) : k_(ambient_rank), gens_(std::move(generators)) {
  for (auto& g : gens_)
    if (static_cast<int>(g.size()) != k_) throw std::invalid_argument("generator length differs from ambient rank");
  basis_ = hnf(gens_);
}

Subgroup Subgroup::full(int k) {
  IntMat id(k, IntVec(k, Int(0)));
  for (int i = 0; i < k; ++i) id[i][i] = 1;
  return Subgroup(k, id);
}

Subgroup Subgroup::zero(int k) { return Subgroup(k, {}); }

std::optional<IntVec> coordinates_in(const Subgroup& s, const IntVec& v0) {
  IntVec v = v0;
  IntVec coeff;
  for (const auto& row : s.hnf_basis()) {
    int p = pivot_of(row);
    if (v[p] % row[p] != 0) return std::nullopt;
    Int q = v[p] / row[p];
    coeff.push_back(q);
    axpy_row(v, q, row);
  }
  for (auto& x : v)
    if (x != 0) return std::nullopt;
  return coeff;
}

bool Subgroup::contains(const IntVec& v) const { return coordinates_in(*this, v).has_value(); }

std::string Subgroup::str() const {
  std::ostringstream os;
  os << "<";
  for (size_t i = 0; i < basis_.size(); ++i) {
    os << (i ? ", " : "") << "(";
    for (size_t j = 0; j < basis_[i].size(); ++j) os << (j ? "," : "") << basis_[i][j].get_str();
    os << ")";
  }
  os << ">";
  return os.str();
}

IntMat clear_denominators(const RatMat& m) {
  IntMat out;
  for (const auto& row : m) {
    Int den = 1;
    for (auto& q : row) den = lcm(den, Int(q.get_den()));
    IntVec r;
    Int g = 0;
    for (auto& q : row) {
      r.push_back(Int(q * den));
      g = gcd(g, r.back());
    }
    if (g == 0) continue;
    for (auto& x : r) x /= g;
    out.push_back(std::move(r));
  }
  return out;
}

Subgroup integer_kernel(const IntMat& a, int k) {
  int rows = static_cast<int>(a.size());
  if (rows == 0) return Subgroup::full(k);
  IntMat aug(k, IntVec(rows + k, Int(0)));
  for (int j = 0; j < k; ++j) {
    for (int i = 0; i < rows; ++i) aug[j][i] = a[i][j];
    aug[j][rows + j] = 1;
  }
  int r = echelon(aug, rows, false);
  IntMat gens;
  for (int j = r; j < k; ++j) gens.emplace_back(aug[j].begin() + rows, aug[j].end());
  return Subgroup(k, gens);
}

Subgroup integer_kernel(const RatMat& m, int k) { return integer_kernel(clear_denominators(m), k); }

Subgroup integer_kernel(const FieldMat& m, int k) {
  RatMat rows;
  for (const auto& row : m) {
    if (static_cast<int>(row.size()) != k) throw std::invalid_argument("matrix column count differs from k");
    RatMat split = rational_split(row);
    for (auto& r : split) rows.push_back(std::move(r));
  }
  return integer_kernel(rows, k);
}

Subgroup subgroup_sum(const std::vector<Subgroup>& parts) {
  if (parts.empty()) throw std::invalid_argument("empty subgroup list");
  int k = parts[0].ambient_rank();
  IntMat gens;
  for (const auto& p : parts) {
    if (p.ambient_rank() != k) throw std::invalid_argument("ambient ranks differ");
    for (const auto& b : p.hnf_basis()) gens.push_back(b);
  }
  return Subgroup(k, gens);
}

std::optional<Int> index_in_ambient(const Subgroup& s) {
  if (s.rank() < s.ambient_rank()) return std::nullopt;
  Int det = 1;
  for (int i = 0; i < s.rank(); ++i) det *= s.hnf_basis()[i][i];
  return abs(det);
}

Subgroup saturation(const Subgroup& s) {
  int k = s.ambient_rank();
  if (s.rank() == 0) return Subgroup::zero(k);
  Subgroup orth = integer_kernel(s.hnf_basis(), k);
  return integer_kernel(orth.hnf_basis(), k);
}

Subgroup intersection(const Subgroup& a, const Subgroup& b) {
  int k = a.ambient_rank();
  int ra = a.rank(), rb = b.rank();
  if (ra == 0 || rb == 0) return Subgroup::zero(k);
  // Solve sum u_i a_i - sum v_j b_j = 0.
  IntMat sys(k, IntVec(ra + rb, Int(0)));
  for (int c = 0; c < k; ++c) {
    for (int i = 0; i < ra; ++i) sys[c][i] = a.hnf_basis()[i][c];
    for (int j = 0; j < rb; ++j) sys[c][ra + j] = -b.hnf_basis()[j][c];
  }
  Subgroup ker = integer_kernel(sys, ra + rb);
  IntMat gens;
  for (const auto& uv : ker.hnf_basis()) {
    IntVec x(k, Int(0));
    for (int i = 0; i < ra; ++i)
      for (int c = 0; c < k; ++c) x[c] += uv[i] * a.hnf_basis()[i][c];
    gens.push_back(x);
  }
  return Subgroup(k, gens);
}

std::string index_str(const std::optional<Int>& idx) { return idx ? idx->get_str() : "INFINITE"; }

}  // namespace cutproj
