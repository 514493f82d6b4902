#ifndef NHP_SCALAR_HPP
#define NHP_SCALAR_HPP

#include <string>

#include "nhp/bigfloat.hpp"
#include "nhp/rational.hpp"

namespace nhp {

template <class S>
struct ScalarTraits;

template <>
struct ScalarTraits<Rational> {
  static constexpr bool is_exact = true;
  static const char* name() { return "exact"; }
  static Rational parse(const std::string& s) { return Rational::parse(s); }
  // Anything equal to zero is zero; no rounding fuzz in exact mode.
  static Rational zero_gauge() { return Rational(0); }
};

template <>
struct ScalarTraits<BigFloat> {
  static constexpr bool is_exact = false;
  static const char* name() { return "float"; }
  static BigFloat parse(const std::string& s) { return BigFloat::parse(s); }
  static BigFloat zero_gauge() {
    return pow2(-static_cast<long>(BigFloat::context_precision() / 2));
  }
};

inline double to_double(const Rational& x) { return x.to_double(); }
inline double to_double(const BigFloat& x) { return x.to_double(); }
inline BigFloat to_bigfloat(const Rational& x) { return BigFloat(x); }
inline const BigFloat& to_bigfloat(const BigFloat& x) { return x; }
inline std::string scalar_str(const Rational& x) { return x.str(); }
inline std::string scalar_str(const BigFloat& x) { return x.str(); }
inline bool is_zero(const Rational& x) { return x.is_zero(); }
inline bool is_zero(const BigFloat& x) { return x.is_zero(); }
inline int sign_of(const Rational& x) { return x.sign(); }
inline int sign_of(const BigFloat& x) { return x.sign(); }

// "Negligible relative to scale": exact scalars only vanish exactly; floats
// vanish below the half-precision gauge. Used for rank/degree bookkeeping in
// float mode.
template <class S>
bool negligible(const S& x, const S& scale) {
  if constexpr (ScalarTraits<S>::is_exact) {
    (void)scale;
    return is_zero(x);
  } else {
    if (is_zero(x)) return true;
    S gauge = ScalarTraits<S>::zero_gauge();
    S bound = (is_zero(scale) ? gauge : abs(scale) * gauge);
    return abs(x) <= bound;
  }
}

// Minimal complex pair over an ordered field scalar. Not std::complex because
// exact scalars have no NaN/inf semantics and we want exact division.
template <class S>
struct Complex {
  S re{0}, im{0};

  Complex() = default;
  Complex(S r) : re(std::move(r)) {}
  Complex(S r, S i) : re(std::move(r)), im(std::move(i)) {}

  bool is_real() const { return is_zero(im); }
  Complex conj() const { return Complex(re, -im); }
  S abs2() const { return re * re + im * im; }

  Complex operator-() const { return Complex(-re, -im); }
  Complex& operator+=(const Complex& o) { re += o.re; im += o.im; return *this; }
  Complex& operator-=(const Complex& o) { re -= o.re; im -= o.im; return *this; }
  Complex& operator*=(const Complex& o) {
    S r = re * o.re - im * o.im;
    im = re * o.im + im * o.re;
    re = r;
    return *this;
  }
  Complex& operator/=(const Complex& o) {
    S d = o.abs2();
    if (is_zero(d)) throw std::domain_error("Complex: division by zero");
    S r = (re * o.re + im * o.im) / d;
    im = (im * o.re - re * o.im) / d;
    re = r;
    return *this;
  }

  friend Complex operator+(Complex a, const Complex& b) { return a += b; }
  friend Complex operator-(Complex a, const Complex& b) { return a -= b; }
  friend Complex operator*(Complex a, const Complex& b) { return a *= b; }
  friend Complex operator/(Complex a, const Complex& b) { return a /= b; }
  friend bool operator==(const Complex& a, const Complex& b) { return a.re == b.re && a.im == b.im; }
  friend bool operator!=(const Complex& a, const Complex& b) { return !(a == b); }
};

template <class S>
double abs_to_double(const Complex<S>& z) {
  return std::sqrt(to_double(z.abs2()));
}

}  // namespace nhp

#endif  // NHP_SCALAR_HPP
