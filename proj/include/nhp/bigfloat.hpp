#ifndef NHP_BIGFLOAT_HPP
#define NHP_BIGFLOAT_HPP

#include <mpfr.h>

#include <atomic>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <utility>

#include "nhp/rational.hpp"

namespace nhp {

// Fixed-precision binary float on top of MPFR. Precision is a process-wide
// context (set once per run before any computation); every operation rounds
// to the context precision so a computation never silently mixes precisions.
class BigFloat {
 public:
  static void set_context_precision(unsigned bits) {
    if (bits < 64) throw std::invalid_argument("BigFloat: precision must be >= 64 bits");
    context_bits_.store(bits, std::memory_order_relaxed);
  }
  static unsigned context_precision() { return context_bits_.load(std::memory_order_relaxed); }

  BigFloat() { mpfr_init2(v_, prec()); mpfr_set_zero(v_, 1); }
  BigFloat(int i) { mpfr_init2(v_, prec()); mpfr_set_si(v_, i, MPFR_RNDN); }
  BigFloat(long i) { mpfr_init2(v_, prec()); mpfr_set_si(v_, i, MPFR_RNDN); }
  BigFloat(long num, long den) : BigFloat(Rational(num, den)) {}
  explicit BigFloat(double d) { mpfr_init2(v_, prec()); mpfr_set_d(v_, d, MPFR_RNDN); }
  explicit BigFloat(const Rational& q) {
    mpfr_init2(v_, prec());
    mpfr_set_q(v_, q.raw().get_mpq_t(), MPFR_RNDN);
  }

  BigFloat(const BigFloat& o) { mpfr_init2(v_, prec()); mpfr_set(v_, o.v_, MPFR_RNDN); }
  BigFloat(BigFloat&& o) noexcept {
    mpfr_init2(v_, prec());
    mpfr_swap(v_, o.v_);
  }
  BigFloat& operator=(const BigFloat& o) {
    if (this != &o) mpfr_set(v_, o.v_, MPFR_RNDN);
    return *this;
  }
  BigFloat& operator=(BigFloat&& o) noexcept {
    if (this != &o) mpfr_swap(v_, o.v_);
    return *this;
  }
  ~BigFloat() { mpfr_clear(v_); }

  static BigFloat parse(const std::string& s) {
    if (s.find('/') != std::string::npos) return BigFloat(Rational::parse(s));
    BigFloat r;
    if (s.empty() || mpfr_set_str(r.v_, s.c_str(), 10, MPFR_RNDN) != 0)
      throw std::invalid_argument("BigFloat::parse: bad literal '" + s + "'");
    return r;
  }

  mpfr_srcptr raw() const { return v_; }
  mpfr_ptr raw() { return v_; }

  int sign() const { return mpfr_sgn(v_); }
  bool is_zero() const { return mpfr_zero_p(v_) != 0; }
  bool is_finite() const { return mpfr_number_p(v_) != 0; }
  double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }

  // Exact: a binary float is a dyadic rational.
  Rational to_rational() const {
    if (!is_finite()) throw std::domain_error("BigFloat::to_rational: non-finite");
    mpq_class q;
    mpfr_get_q(q.get_mpq_t(), v_);
    return Rational(q);
  }

  std::string str(int digits10 = 0) const;

  BigFloat operator-() const { BigFloat r; mpfr_neg(r.v_, v_, MPFR_RNDN); return r; }

#define NHP_BF_BINOP(op, fn)                                      \
  BigFloat& operator op##=(const BigFloat& o) {                   \
    fn(v_, v_, o.v_, MPFR_RNDN);                                  \
    return *this;                                                 \
  }                                                               \
  friend BigFloat operator op(BigFloat a, const BigFloat& b) { return a op##= b; }
  NHP_BF_BINOP(+, mpfr_add)
  NHP_BF_BINOP(-, mpfr_sub)
  NHP_BF_BINOP(*, mpfr_mul)
#undef NHP_BF_BINOP

  BigFloat& operator/=(const BigFloat& o) {
    if (o.is_zero()) throw std::domain_error("BigFloat: division by zero");
    mpfr_div(v_, v_, o.v_, MPFR_RNDN);
    return *this;
  }
  friend BigFloat operator/(BigFloat a, const BigFloat& b) { return a /= b; }

  friend bool operator==(const BigFloat& a, const BigFloat& b) { return mpfr_equal_p(a.v_, b.v_); }
  friend bool operator!=(const BigFloat& a, const BigFloat& b) { return !mpfr_equal_p(a.v_, b.v_); }
  friend bool operator<(const BigFloat& a, const BigFloat& b) { return mpfr_less_p(a.v_, b.v_); }
  friend bool operator<=(const BigFloat& a, const BigFloat& b) { return mpfr_lessequal_p(a.v_, b.v_); }
  friend bool operator>(const BigFloat& a, const BigFloat& b) { return mpfr_greater_p(a.v_, b.v_); }
  friend bool operator>=(const BigFloat& a, const BigFloat& b) { return mpfr_greaterequal_p(a.v_, b.v_); }

  friend BigFloat abs(const BigFloat& a) {
    BigFloat r;
    mpfr_abs(r.v_, a.v_, MPFR_RNDN);
    return r;
  }
  friend BigFloat sqrt(const BigFloat& a) {
    BigFloat r;
    mpfr_sqrt(r.v_, a.v_, MPFR_RNDN);
    return r;
  }
  friend BigFloat tgamma(const BigFloat& a) {
    BigFloat r;
    mpfr_gamma(r.v_, a.v_, MPFR_RNDN);
    return r;
  }

 private:
  static mpfr_prec_t prec() { return static_cast<mpfr_prec_t>(context_bits_.load(std::memory_order_relaxed)); }
  static inline std::atomic<unsigned> context_bits_{192};
  mpfr_t v_;
};

inline BigFloat pow2(long e) {  // 2^e
  BigFloat r(1);
  mpfr_mul_2si(r.raw(), r.raw(), e, MPFR_RNDN);
  return r;
}

inline std::string BigFloat::str(int digits10) const {
  if (digits10 <= 0)
    digits10 = static_cast<int>(context_precision() * 0.30103) + 3;
  char* s = nullptr;
  mpfr_asprintf(&s, "%.*Rg", digits10, v_);
  std::string out(s);
  mpfr_free_str(s);
  return out;
}

inline std::ostream& operator<<(std::ostream& os, const BigFloat& x) { return os << x.str(); }

}  // namespace nhp

#include <Eigen/Core>

namespace Eigen {
template <>
struct NumTraits<nhp::BigFloat> {
  typedef nhp::BigFloat Real;
  typedef nhp::BigFloat NonInteger;
  typedef nhp::BigFloat Nested;
  typedef nhp::BigFloat Literal;
  enum {
    IsComplex = 0,
    IsInteger = 0,
    IsSigned = 1,
    RequireInitialization = 1,
    ReadCost = 8,
    AddCost = 20,
    MulCost = 30,
  };
  static inline Real epsilon() {
    return nhp::pow2(1 - static_cast<long>(nhp::BigFloat::context_precision()));
  }
  static inline Real dummy_precision() {
    return nhp::pow2(-static_cast<long>(nhp::BigFloat::context_precision() / 2));
  }
  static inline int digits10() {
    return static_cast<int>(nhp::BigFloat::context_precision() * 0.30103);
  }
};
}  // namespace Eigen

#endif  // NHP_BIGFLOAT_HPP
