#ifndef NHP_RATIONAL_HPP
#define NHP_RATIONAL_HPP

#include <gmpxx.h>

#include <cmath>
#include <compare>
#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>

namespace nhp {

// Arbitrary-precision rational with eager value semantics. gmpxx expression
// templates are deliberately hidden behind this wrapper so that generic code
// (and Eigen) always sees a plain regular type.
class Rational {
 public:
  Rational() : v_(0) {}
  Rational(int i) : v_(i) {}
  Rational(long i) : v_(static_cast<signed long>(i)) {}
  Rational(long num, long den) : v_(mpq_class(num, den)) {
    if (den == 0) throw std::invalid_argument("Rational: zero denominator");
    v_.canonicalize();
  }
  explicit Rational(const mpq_class& q) : v_(q) { v_.canonicalize(); }
  explicit Rational(const mpz_class& z) : v_(z) {}

  // Doubles convert exactly (they are dyadic rationals).
  explicit Rational(double d) {
    if (!std::isfinite(d)) throw std::invalid_argument("Rational: non-finite double");
    v_ = mpq_class(d);
  }

  static Rational parse(const std::string& text);

  const mpq_class& raw() const { return v_; }
  mpz_class numerator() const { return v_.get_num(); }
  mpz_class denominator() const { return v_.get_den(); }

  int sign() const { return sgn(v_); }
  bool is_zero() const { return sgn(v_) == 0; }
  bool is_integer() const { return v_.get_den() == 1; }

  double to_double() const { return v_.get_d(); }
  std::string str() const;

  Rational operator-() const { Rational r; r.v_ = -v_; return r; }

  Rational& operator+=(const Rational& o) { v_ += o.v_; return *this; }
  Rational& operator-=(const Rational& o) { v_ -= o.v_; return *this; }
  Rational& operator*=(const Rational& o) { v_ *= o.v_; return *this; }
  Rational& operator/=(const Rational& o) {
    if (o.is_zero()) throw std::domain_error("Rational: division by zero");
    v_ /= o.v_;
    return *this;
  }

  friend Rational operator+(Rational a, const Rational& b) { return a += b; }
  friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
  friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
  friend Rational operator/(Rational a, const Rational& b) { return a /= b; }

  friend bool operator==(const Rational& a, const Rational& b) { return a.v_ == b.v_; }
  friend bool operator!=(const Rational& a, const Rational& b) { return a.v_ != b.v_; }
  friend bool operator<(const Rational& a, const Rational& b) { return a.v_ < b.v_; }
  friend bool operator<=(const Rational& a, const Rational& b) { return a.v_ <= b.v_; }
  friend bool operator>(const Rational& a, const Rational& b) { return a.v_ > b.v_; }
  friend bool operator>=(const Rational& a, const Rational& b) { return a.v_ >= b.v_; }

 private:
  mpq_class v_;
};

inline Rational abs(const Rational& a) { return a.sign() < 0 ? -a : a; }

inline std::string Rational::str() const {
  return v_.get_str();  // "p/q" or "p"
}

// Accepts "p/q", integers, and plain decimal literals ("2.5", "-0.125e2"),
// all read exactly.
inline Rational Rational::parse(const std::string& text) {
  std::string s;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
  if (s.empty()) throw std::invalid_argument("Rational::parse: empty string");

  if (s.find('/') != std::string::npos) {
    mpq_class q;
    if (q.set_str(s, 10) != 0)
      throw std::invalid_argument("Rational::parse: bad fraction '" + text + "'");
    if (q.get_den() == 0) throw std::invalid_argument("Rational::parse: zero denominator");
    q.canonicalize();
    return Rational(q);
  }

  // decimal form: [sign] digits [. digits] [e[sign]digits]
  std::string mantissa;
  long exp10 = 0;
  std::size_t i = 0;
  if (s[i] == '+' || s[i] == '-') mantissa.push_back(s[i++]);
  bool seen_digit = false, seen_dot = false;
  long frac_digits = 0;
  for (; i < s.size(); ++i) {
    char c = s[i];
    if (std::isdigit(static_cast<unsigned char>(c))) {
      mantissa.push_back(c);
      seen_digit = true;
      if (seen_dot) ++frac_digits;
    } else if (c == '.' && !seen_dot) {
      seen_dot = true;
    } else if ((c == 'e' || c == 'E') && seen_digit) {
      exp10 = std::stol(s.substr(i + 1));
      break;
    } else {
      throw std::invalid_argument("Rational::parse: bad literal '" + text + "'");
    }
  }
  if (!seen_digit) throw std::invalid_argument("Rational::parse: bad literal '" + text + "'");

  mpz_class num(mantissa.empty() || mantissa == "-" || mantissa == "+" ? "0" : mantissa);
  mpz_class den(1);
  long net = exp10 - frac_digits;
  mpz_class ten(10);
  if (net >= 0) {
    mpz_class scale;
    mpz_pow_ui(scale.get_mpz_t(), ten.get_mpz_t(), static_cast<unsigned long>(net));
    num *= scale;
  } else {
    mpz_pow_ui(den.get_mpz_t(), ten.get_mpz_t(), static_cast<unsigned long>(-net));
  }
  mpq_class q(num, den);
  q.canonicalize();
  return Rational(q);
}

inline std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

}  // namespace nhp

#include <Eigen/Core>

namespace Eigen {
template <>
struct NumTraits<nhp::Rational> {
  typedef nhp::Rational Real;
  typedef nhp::Rational NonInteger;
  typedef nhp::Rational Nested;
  typedef nhp::Rational Literal;
  enum {
    IsComplex = 0,
    IsInteger = 0,
    IsSigned = 1,
    RequireInitialization = 1,
    ReadCost = 8,
    AddCost = 40,
    MulCost = 60,
  };
  // Exact field: no rounding, so zero thresholds keep rank decisions exact.
  static inline Real epsilon() { return Real(0); }
  static inline Real dummy_precision() { return Real(0); }
  static inline int digits10() { return 0; }
};
}  // namespace Eigen

#endif  // NHP_RATIONAL_HPP
