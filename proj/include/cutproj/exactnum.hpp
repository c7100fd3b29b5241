#pragma once

#include <gmpxx.h>

#include <memory>
#include <string>
#include <utility>
#include <vector>

namespace cutproj {

using Int = mpz_class;
using Rat = mpq_class;

class Field;
using FieldPtr = std::shared_ptr<const Field>;

// Real number field Q(theta), theta the unique root of min_poly inside root_interval.
class Field {
 public:
  // min_poly is given in ascending degree; it is scaled to be monic.
  static FieldPtr make(std::vector<Rat> min_poly, Rat lo, Rat hi);
  static FieldPtr rationals();

  int degree() const { return static_cast<int>(poly_.size()) - 1; }
  const std::vector<Rat>& min_poly() const { return poly_; }
  const Rat& lo() const { return lo_; }
  const Rat& hi() const { return hi_; }
  // Integer form of the minimal polynomial (primitive, positive leading coefficient).
  std::vector<Int> integer_min_poly() const;

  // theta^i as a double; reliable to about 1e-15 relative.
  double theta_power(int i) const { return powd_[i]; }
  // Rational enclosure of theta of width at most 2^-bits.
  std::pair<Rat, Rat> theta_enclosure(int bits) const;
  // Coefficients of theta^(deg+j) in the power basis, j = 0..deg-2.
  const std::vector<std::vector<Rat>>& reduction() const { return red_; }
  bool has_rational_root_warning() const { return warn_rational_root_; }

  bool same_as(const Field& other) const;
  std::string describe() const;

 private:
  Field() = default;
  std::vector<Rat> poly_;
  Rat lo_, hi_;
  Rat flo_, fhi_;  // pre-refined interval
  int sign_at_lo_ = 0;
  std::vector<double> powd_;
  std::vector<std::vector<Rat>> red_;
  bool warn_rational_root_ = false;

  friend int poly_sign_at(const Field&, const Rat&);
};

class FE {
 public:
  FE();
  FE(long v);
  FE(const Rat& v);
  FE(FieldPtr f, const Rat& v);
  FE(FieldPtr f, std::vector<Rat> coeffs);

  static FE theta(FieldPtr f);

  const FieldPtr& field() const { return f_; }
  int degree() const { return static_cast<int>(c_.size()); }
  const std::vector<Rat>& coeffs() const { return c_; }
  const Rat& coeff(int i) const { return c_[i]; }

  bool is_zero() const;
  bool is_rational() const;
  int sign() const;
  double approx() const;

  FE operator-() const;
  FE& operator+=(const FE& b);
  FE& operator-=(const FE& b);
  FE& operator*=(const FE& b);
  FE& operator/=(const FE& b);
  FE inverse() const;
  FE scaled(const Rat& q) const;
  FE mul_int(long v) const;

  friend FE operator+(FE a, const FE& b) { return a += b; }
  friend FE operator-(FE a, const FE& b) { return a -= b; }
  friend FE operator*(FE a, const FE& b) { return a *= b; }
  friend FE operator/(FE a, const FE& b) { return a /= b; }
  friend bool operator==(const FE& a, const FE& b);
  friend bool operator!=(const FE& a, const FE& b) { return !(a == b); }
  friend bool operator<(const FE& a, const FE& b) { return cmp(a, b) < 0; }
  friend int cmp(const FE& a, const FE& b);

  std::string str() const;
  // Canonical text key usable in maps.
  std::string key() const;

 private:
  FieldPtr f_;
  std::vector<Rat> c_;
  void adopt(const FE& b);
};

using FieldVec = std::vector<FE>;
using FieldMat = std::vector<FieldVec>;
using RatMat = std::vector<std::vector<Rat>>;

enum class ArithOp { add, sub, mul, div };
FE field_arith(const FE& a, const FE& b, ArithOp op);

int sign(const FE& a);

struct Enclosure {
  double lo = 0, hi = 0;
};
// Outward-rounded enclosure with width about 2^-bits * max(1, |a|).
Enclosure to_float(const FE& a, int precision_bits);
// Same, kept as rationals.
std::pair<Rat, Rat> enclose(const FE& a, int precision_bits);

// Column j holds the coefficient vector of v[j]; degree x len(v).
RatMat rational_split(const FieldVec& v, int degree);
RatMat rational_split(const FieldVec& v);

FieldPtr common_field(const FieldVec& v);

// Parse "p/q" or "p".
Rat parse_rational(const std::string& s);
std::string rat_str(const Rat& q);

}  // namespace cutproj
