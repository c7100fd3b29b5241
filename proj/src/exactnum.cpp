#include "cutproj/exactnum.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace cutproj {

namespace {

using Poly = std::vector<Rat>;

void trim(Poly& p) {
  while (!p.empty() && p.back() == 0) p.pop_back();
}

Poly derivative(const Poly& p) {
  Poly d;
  for (size_t i = 1; i < p.size(); ++i) d.push_back(p[i] * static_cast<long>(i));
  trim(d);
  return d;
}

// Remainder of a modulo b (b nonzero).
Poly poly_rem(Poly a, const Poly& b) {
  trim(a);
  while (a.size() >= b.size() && !a.empty()) {
    Rat q = a.back() / b.back();
    size_t shift = a.size() - b.size();
    for (size_t i = 0; i < b.size(); ++i) a[i + shift] -= q * b[i];
    a.pop_back();
    trim(a);
  }
  return a;
}

Poly poly_gcd(Poly a, Poly b) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    Poly r = poly_rem(a, b);
    a = std::move(b);
    b = std::move(r);
  }
  return a;
}

Rat eval(const Poly& p, const Rat& x) {
  Rat acc = 0;
  for (size_t i = p.size(); i-- > 0;) acc = acc * x + p[i];
  return acc;
}

int rsign(const Rat& q) { return mpq_sgn(q.get_mpq_t()); }

// Number of sign changes in the Sturm sequence at x.
int sturm_changes(const std::vector<Poly>& seq, const Rat& x) {
  int changes = 0, last = 0;
  for (const auto& p : seq) {
    int s = rsign(eval(p, x));
    if (s == 0) continue;
    if (last != 0 && s != last) ++changes;
    last = s;
  }
  return changes;
}

struct RatInterval {
  Rat lo, hi;
};

RatInterval imul(const RatInterval& a, const RatInterval& b) {
  Rat p[4] = {a.lo * b.lo, a.lo * b.hi, a.hi * b.lo, a.hi * b.hi};
  RatInterval r{p[0], p[0]};
  for (int i = 1; i < 4; ++i) {
    if (p[i] < r.lo) r.lo = p[i];
    if (p[i] > r.hi) r.hi = p[i];
  }
  return r;
}

// Interval Horner evaluation of sum c_i t^i for t in [lo, hi].
RatInterval ieval(const std::vector<Rat>& c, const Rat& lo, const Rat& hi) {
  RatInterval t{lo, hi};
  RatInterval acc{c.back(), c.back()};
  for (size_t i = c.size() - 1; i-- > 0;) {
    acc = imul(acc, t);
    acc.lo += c[i];
    acc.hi += c[i];
  }
  return acc;
}

double to_d(const Rat& q) { return q.get_d(); }

bool usable(double d, const Rat& q) { return q == 0 || std::isnormal(d); }

}  // namespace

int poly_sign_at(const Field& f, const Rat& x) { return rsign(eval(f.poly_, x)); }

FieldPtr Field::make(std::vector<Rat> min_poly, Rat lo, Rat hi) {
  trim(min_poly);
  if (min_poly.size() < 2) throw std::invalid_argument("minimal polynomial must have degree >= 1");
  if (!(lo < hi)) throw std::invalid_argument("root interval must satisfy lo < hi");
  Rat lead = min_poly.back();
  for (auto& c : min_poly) c /= lead;

  auto g = poly_gcd(min_poly, derivative(min_poly));
  if (g.size() > 1) throw std::invalid_argument("minimal polynomial is not squarefree");

  std::vector<Poly> seq{min_poly, derivative(min_poly)};
  while (true) {
    Poly r = poly_rem(seq[seq.size() - 2], seq.back());
    if (r.empty()) break;
    for (auto& c : r) c = -c;
    seq.push_back(r);
  }
  if (eval(min_poly, lo) == 0 || eval(min_poly, hi) == 0)
    throw std::invalid_argument("root interval endpoint is a root");
  int roots = sturm_changes(seq, lo) - sturm_changes(seq, hi);
  if (roots != 1) throw std::invalid_argument("root interval must isolate exactly one real root");

  std::shared_ptr<Field> f(new Field());
  f->poly_ = min_poly;
  f->lo_ = lo;
  f->hi_ = hi;
  f->sign_at_lo_ = rsign(eval(min_poly, lo));
  Rat a = lo, b = hi;
  Rat target = Rat(1, 1);
  target /= Rat(Int(1) << 90);
  while (b - a > target) {
    Rat m = (a + b) / 2;
    int s = rsign(eval(min_poly, m));
    if (s == 0) {
      a = b = m;
      break;
    }
    if (s == f->sign_at_lo_) a = m;
    else b = m;
  }
  f->flo_ = a;
  f->fhi_ = b;
  int deg = f->degree();
  Rat mid = (a + b) / 2, p = 1;
  for (int i = 0; i < 2 * deg + 1; ++i) {
    f->powd_.push_back(to_d(p));
    p *= mid;
  }
  // theta^deg = -sum p_i theta^i
  std::vector<Rat> cur(deg);
  for (int i = 0; i < deg; ++i) cur[i] = -min_poly[i];
  for (int j = 0; j + 1 < deg; ++j) {
    f->red_.push_back(cur);
    std::vector<Rat> next(deg);
    Rat top = cur[deg - 1];
    for (int i = deg - 1; i > 0; --i) next[i] = cur[i - 1];
    next[0] = 0;
    for (int i = 0; i < deg; ++i) next[i] += top * (-min_poly[i]);
    cur = next;
  }
  if (deg == 1) f->red_.clear();

  // Rational roots inside the interval mean the embedding is rational: warn.
  if (deg > 1) {
    auto ip = f->integer_min_poly();
    Int c0 = abs(ip.front()), cn = abs(ip.back());
    if (c0 != 0 && c0 < 100000 && cn < 100000) {
      std::vector<Int> dp, dq;
      for (Int i = 1; i <= c0; ++i)
        if (c0 % i == 0) dp.push_back(i);
      for (Int i = 1; i <= cn; ++i)
        if (cn % i == 0) dq.push_back(i);
      for (auto& pp : dp)
        for (auto& qq : dq)
          for (int s : {1, -1}) {
            Rat x(pp * s, qq);
            x.canonicalize();
            if (x > lo && x < hi && eval(min_poly, x) == 0) f->warn_rational_root_ = true;
          }
    } else if (ip.front() == 0 && lo < 0 && hi > 0) {
      f->warn_rational_root_ = true;
    }
  }
  return f;
}

FieldPtr Field::rationals() {
  static FieldPtr q = make({Rat(0), Rat(1)}, Rat(-1), Rat(1));
  return q;
}

std::vector<Int> Field::integer_min_poly() const {
  Int den = 1;
  for (auto& c : poly_) den = lcm(den, Int(c.get_den()));
  std::vector<Int> out;
  for (auto& c : poly_) out.push_back(Int(c * den));
  return out;
}

std::pair<Rat, Rat> Field::theta_enclosure(int bits) const {
  Rat a = flo_, b = fhi_;
  Rat target = Rat(1);
  target /= Rat(Int(1) << bits);
  while (b - a > target) {
    Rat m = (a + b) / 2;
    int s = poly_sign_at(*this, m);
    if (s == 0) return {m, m};
    if (s == sign_at_lo_) a = m;
    else b = m;
  }
  return {a, b};
}

bool Field::same_as(const Field& o) const {
  if (this == &o) return true;
  if (poly_ != o.poly_) return false;
  return std::max(flo_, o.flo_) <= std::min(fhi_, o.fhi_);
}

std::string Field::describe() const {
  std::ostringstream os;
  os << "Q(t), ";
  for (int i = degree(); i >= 0; --i) {
    if (poly_[i] == 0) continue;
    os << (i == degree() ? "" : " + ") << poly_[i].get_str();
    if (i > 0) os << "*t^" << i;
  }
  os << " = 0, t in (" << lo_.get_str() << ", " << hi_.get_str() << ")";
  return os.str();
}

// ---------------------------------------------------------------- FE

FE::FE() : f_(Field::rationals()), c_{Rat(0)} {}
FE::FE(long v) : f_(Field::rationals()), c_{Rat(v)} {}
FE::FE(const Rat& v) : f_(Field::rationals()), c_{v} { c_[0].canonicalize(); }
FE::FE(FieldPtr f, const Rat& v) : f_(std::move(f)) {
  c_.assign(f_->degree(), Rat(0));
  c_[0] = v;
  c_[0].canonicalize();
}
FE::FE(FieldPtr f, std::vector<Rat> coeffs) : f_(std::move(f)), c_(std::move(coeffs)) {
  for (auto& q : c_) q.canonicalize();
  if (static_cast<int>(c_.size()) > f_->degree()) {
    for (size_t i = f_->degree(); i < c_.size(); ++i)
      if (c_[i] != 0) throw std::invalid_argument("coefficient list longer than field degree");
    c_.resize(f_->degree());
  }
  c_.resize(f_->degree(), Rat(0));
}

FE FE::theta(FieldPtr f) {
  FE r(f, Rat(0));
  if (f->degree() == 1) {
    // theta is the rational root itself
    r.c_[0] = -f->min_poly()[0];
  } else {
    r.c_[1] = 1;
  }
  return r;
}

void FE::adopt(const FE& b) {
  if (f_ == b.f_) return;
  if (f_->degree() == 1 && f_ == Field::rationals()) {
    Rat v = c_[0];
    f_ = b.f_;
    c_.assign(f_->degree(), Rat(0));
    c_[0] = v;
    return;
  }
  if (b.f_->degree() == 1 && b.f_ == Field::rationals()) return;
  if (!f_->same_as(*b.f_)) throw std::invalid_argument("field elements from different fields");
}

bool FE::is_zero() const {
  for (auto& c : c_)
    if (c != 0) return false;
  return true;
}

bool FE::is_rational() const {
  for (size_t i = 1; i < c_.size(); ++i)
    if (c_[i] != 0) return false;
  return true;
}

int FE::sign() const {
  if (is_rational()) return rsign(c_[0]);
  double v = 0, mag = 0;
  bool ok = true;
  for (size_t i = 0; i < c_.size(); ++i) {
    double ci = to_d(c_[i]);
    if (!usable(ci, c_[i])) {
      ok = false;
      break;
    }
    double t = ci * f_->theta_power(static_cast<int>(i));
    v += t;
    mag += std::fabs(t);
  }
  if (ok && std::isfinite(v) && std::fabs(v) > mag * 1e-13) return v > 0 ? 1 : -1;
  for (int bits = 100;; bits *= 2) {
    auto [a, b] = f_->theta_enclosure(bits);
    auto iv = ieval(c_, a, b);
    if (iv.lo > 0) return 1;
    if (iv.hi < 0) return -1;
    if (a == b) return rsign(iv.lo);
  }
}

double FE::approx() const {
  double v = 0;
  for (size_t i = 0; i < c_.size(); ++i) v += to_d(c_[i]) * f_->theta_power(static_cast<int>(i));
  return v;
}

FE FE::operator-() const {
  FE r = *this;
  for (auto& c : r.c_) c = -c;
  return r;
}

FE& FE::operator+=(const FE& b) {
  adopt(b);
  if (b.c_.size() == 1 && c_.size() > 1) {
    c_[0] += b.c_[0];
    return *this;
  }
  for (size_t i = 0; i < c_.size(); ++i) c_[i] += b.c_[i];
  return *this;
}

FE& FE::operator-=(const FE& b) {
  adopt(b);
  if (b.c_.size() == 1 && c_.size() > 1) {
    c_[0] -= b.c_[0];
    return *this;
  }
  for (size_t i = 0; i < c_.size(); ++i) c_[i] -= b.c_[i];
  return *this;
}

FE& FE::operator*=(const FE& b) {
  adopt(b);
  if (b.c_.size() == 1) {
    for (auto& c : c_) c *= b.c_[0];
    return *this;
  }
  if (c_.size() == 1 && b.c_.size() > 1) {
    Rat s = c_[0];
    *this = b;
    for (auto& c : c_) c *= s;
    return *this;
  }
  int deg = f_->degree();
  std::vector<Rat> prod(2 * deg - 1, Rat(0));
  for (int i = 0; i < deg; ++i) {
    if (c_[i] == 0) continue;
    for (int j = 0; j < deg; ++j)
      if (b.c_[j] != 0) prod[i + j] += c_[i] * b.c_[j];
  }
  const auto& red = f_->reduction();
  for (int i = 0; i < deg; ++i) c_[i] = prod[i];
  for (int j = 0; j + 1 < deg; ++j) {
    const Rat& top = prod[deg + j];
    if (top == 0) continue;
    for (int i = 0; i < deg; ++i) c_[i] += top * red[j][i];
  }
  return *this;
}

FE FE::inverse() const {
  if (is_zero()) throw std::domain_error("division by zero");
  if (is_rational()) {
    FE r = *this;
    r.c_.assign(c_.size(), Rat(0));
    r.c_[0] = 1 / c_[0];
    return r;
  }
  int deg = f_->degree();
  // Columns of the multiplication-by-a matrix: a * theta^j.
  RatMat m(deg, std::vector<Rat>(deg + 1, Rat(0)));
  FE col = *this;
  FE th = theta(f_);
  for (int j = 0; j < deg; ++j) {
    for (int i = 0; i < deg; ++i) m[i][j] = col.c_[i];
    col *= th;
  }
  m[0][deg] = 1;
  for (int c = 0; c < deg; ++c) {
    int piv = -1;
    for (int r = c; r < deg; ++r)
      if (m[r][c] != 0) {
        piv = r;
        break;
      }
    if (piv < 0) throw std::domain_error("element is a zero divisor (minimal polynomial reducible)");
    std::swap(m[c], m[piv]);
    Rat inv = 1 / m[c][c];
    for (auto& x : m[c]) x *= inv;
    for (int r = 0; r < deg; ++r) {
      if (r == c || m[r][c] == 0) continue;
      Rat fct = m[r][c];
      for (int k = c; k <= deg; ++k) m[r][k] -= fct * m[c][k];
    }
  }
  FE r(f_, Rat(0));
  for (int i = 0; i < deg; ++i) r.c_[i] = m[i][deg];
  return r;
}

FE& FE::operator/=(const FE& b) {
  if (b.is_zero()) throw std::domain_error("division by zero");
  return *this *= b.inverse();
}

FE FE::scaled(const Rat& q) const {
  FE r = *this;
  for (auto& c : r.c_) c *= q;
  return r;
}

FE FE::mul_int(long v) const {
  FE r = *this;
  for (auto& c : r.c_) c *= v;
  return r;
}

bool operator==(const FE& a, const FE& b) {
  size_t n = std::max(a.c_.size(), b.c_.size());
  for (size_t i = 0; i < n; ++i) {
    const Rat& x = i < a.c_.size() ? a.c_[i] : Rat(0);
    const Rat& y = i < b.c_.size() ? b.c_[i] : Rat(0);
    if (x != y) return false;
  }
  if (!a.is_rational() && !b.is_rational() && a.f_ != b.f_ && !a.f_->same_as(*b.f_)) return false;
  return true;
}

int cmp(const FE& a, const FE& b) { return (a - b).sign(); }

std::string FE::str() const {
  std::ostringstream os;
  bool first = true;
  for (size_t i = 0; i < c_.size(); ++i) {
    if (c_[i] == 0) continue;
    if (!first) os << " + ";
    os << c_[i].get_str();
    if (i == 1) os << "*t";
    if (i > 1) os << "*t^" << i;
    first = false;
  }
  if (first) os << "0";
  return os.str();
}

std::string FE::key() const {
  // Trailing zeros dropped so that a rational has the same key in every field.
  size_t len = c_.size();
  while (len > 1 && c_[len - 1] == 0) --len;
  std::string s;
  for (size_t i = 0; i < len; ++i) {
    s += c_[i].get_str();
    s += ',';
  }
  return s;
}

FE field_arith(const FE& a, const FE& b, ArithOp op) {
  switch (op) {
    case ArithOp::add: return a + b;
    case ArithOp::sub: return a - b;
    case ArithOp::mul: return a * b;
    case ArithOp::div: return a / b;
  }
  throw std::invalid_argument("unknown operation");
}

int sign(const FE& a) { return a.sign(); }

std::pair<Rat, Rat> enclose(const FE& a, int bits) {
  if (a.is_rational()) return {a.coeff(0), a.coeff(0)};
  Rat tol = Rat(1);
  tol /= Rat(Int(1) << bits);
  for (int tb = bits + 16;; tb += 32) {
    auto [lo, hi] = a.field()->theta_enclosure(tb);
    auto iv = ieval(a.coeffs(), lo, hi);
    Rat mag = abs(iv.lo) < abs(iv.hi) ? abs(iv.lo) : abs(iv.hi);
    if (iv.lo <= 0 && iv.hi >= 0) mag = 0;
    Rat scale = mag > 1 ? mag : Rat(1);
    if (iv.hi - iv.lo <= tol * scale || lo == hi) return {iv.lo, iv.hi};
  }
}

Enclosure to_float(const FE& a, int precision_bits) {
  if (precision_bits < 16) throw std::invalid_argument("precision_bits must be >= 16");
  if (a.is_zero()) return {0.0, 0.0};
  auto [lo, hi] = enclose(a, precision_bits + 2);
  double dl = lo.get_d(), dh = hi.get_d();
  if (Rat(dl) > lo) dl = std::nextafter(dl, -std::numeric_limits<double>::infinity());
  if (Rat(dh) < hi) dh = std::nextafter(dh, std::numeric_limits<double>::infinity());
  return {dl, dh};
}

RatMat rational_split(const FieldVec& v, int degree) {
  RatMat m(degree, std::vector<Rat>(v.size(), Rat(0)));
  for (size_t j = 0; j < v.size(); ++j)
    for (int i = 0; i < degree && i < v[j].degree(); ++i) m[i][j] = v[j].coeff(i);
  return m;
}

RatMat rational_split(const FieldVec& v) {
  return rational_split(v, common_field(v)->degree());
}

FieldPtr common_field(const FieldVec& v) {
  FieldPtr f = Field::rationals();
  for (auto& x : v)
    if (x.field()->degree() > f->degree() || (x.field() != f && f == Field::rationals())) f = x.field();
  return f;
}

Rat parse_rational(const std::string& raw) {
  std::string s;
  for (char ch : raw)
    if (!std::isspace(static_cast<unsigned char>(ch))) s += ch;
  if (s.empty()) throw std::invalid_argument("empty rational");
  auto dot = s.find('.');
  if (dot != std::string::npos) {
    bool neg = s[0] == '-';
    std::string body = neg || s[0] == '+' ? s.substr(1) : s;
    dot = body.find('.');
    std::string digits = body.substr(0, dot) + body.substr(dot + 1);
    if (digits.empty()) throw std::invalid_argument("bad decimal: " + raw);
    Int num(digits, 10);
    Int den = 1;
    for (size_t i = dot + 1; i < body.size(); ++i) den *= 10;
    Rat q(num, den);
    q.canonicalize();
    return neg ? Rat(-q) : q;
  }
  Rat q;
  if (q.set_str(s, 10) != 0) throw std::invalid_argument("bad rational: " + raw);
  if (q.get_den() == 0) throw std::invalid_argument("zero denominator: " + raw);
  q.canonicalize();
  return q;
}

std::string rat_str(const Rat& q) { return q.get_str(); }

}  // namespace cutproj
