#ifndef NHP_SERIES_HPP
#define NHP_SERIES_HPP

#include <algorithm>
#include <stdexcept>

#include "nhp/polynomial.hpp"

namespace nhp {

// Truncated Laurent expansion at infinity: coefficients for powers
// z^hi, z^{hi-1}, ..., z^lo are stored and exact; everything above hi is an
// exact zero; anything below lo is unknown. Window arithmetic keeps track of
// how far down a result stays trustworthy.
template <class S>
class LaurentSeries {
 public:
  LaurentSeries() : hi_(0), lo_(0), c_(VecX<S>::Constant(1, S(0))) {}
  LaurentSeries(int hi, int lo, VecX<S> coeffs) : hi_(hi), lo_(lo), c_(std::move(coeffs)) {
    if (lo_ > hi_ || c_.size() != hi_ - lo_ + 1)
      throw std::invalid_argument("LaurentSeries: inconsistent window");
  }

  static LaurentSeries from_polynomial(const Polynomial<S>& p, int lo) {
    int hi = std::max(p.degree(), 0);
    if (lo > hi) lo = hi;
    VecX<S> c = VecX<S>::Constant(hi - lo + 1, S(0));
    for (int k = std::max(lo, 0); k <= p.degree(); ++k) c[hi - k] = p.coeff(k);
    return LaurentSeries(hi, lo, std::move(c));
  }

  // sum_{v=0}^{len-1} m_v z^{-v-1}  (a Cauchy-transform tail)
  static LaurentSeries from_moment_coeffs(const VecX<S>& m) {
    if (m.size() == 0) throw std::invalid_argument("LaurentSeries: empty moment list");
    return LaurentSeries(-1, -static_cast<int>(m.size()), m);
  }

  int hi() const { return hi_; }
  int lo() const { return lo_; }

  S coeff(int power) const {
    if (power > hi_) return S(0);
    if (power < lo_) throw std::out_of_range("LaurentSeries::coeff below valid window");
    return c_[hi_ - power];
  }

  LaurentSeries truncated(int new_lo) const {
    if (new_lo < lo_) throw std::out_of_range("LaurentSeries::truncated beyond window");
    if (new_lo == lo_) return *this;
    return LaurentSeries(hi_, new_lo, c_.head(hi_ - new_lo + 1).eval());
  }

  LaurentSeries operator-() const {
    LaurentSeries r(*this);
    for (Eigen::Index i = 0; i < r.c_.size(); ++i) r.c_[i] = -r.c_[i];
    return r;
  }

  friend LaurentSeries operator+(const LaurentSeries& a, const LaurentSeries& b) {
    int hi = std::max(a.hi_, b.hi_);
    int lo = std::max(a.lo_, b.lo_);
    if (lo > hi) throw std::invalid_argument("LaurentSeries: empty sum window");
    VecX<S> c = VecX<S>::Constant(hi - lo + 1, S(0));
    for (int t = lo; t <= hi; ++t) c[hi - t] = a.coeff_or_zero(t) + b.coeff_or_zero(t);
    return LaurentSeries(hi, lo, std::move(c));
  }
  friend LaurentSeries operator-(const LaurentSeries& a, const LaurentSeries& b) { return a + (-b); }

  friend LaurentSeries operator*(const LaurentSeries& a, const LaurentSeries& b) {
    int hi = a.hi_ + b.hi_;
    int lo = std::max(a.lo_ + b.hi_, b.lo_ + a.hi_);
    if (lo > hi) throw std::invalid_argument("LaurentSeries: empty product window");
    VecX<S> c = VecX<S>::Constant(hi - lo + 1, S(0));
    for (int i = a.lo_; i <= a.hi_; ++i) {
      const S& ai = a.c_[a.hi_ - i];
      if (nhp::is_zero(ai)) continue;
      for (int j = b.lo_; j <= b.hi_; ++j) {
        int t = i + j;
        if (t < lo || t > hi) continue;
        c[hi - t] += ai * b.c_[b.hi_ - j];
      }
    }
    return LaurentSeries(hi, lo, std::move(c));
  }

  friend LaurentSeries operator*(const LaurentSeries& a, const S& s) {
    LaurentSeries r(a);
    for (Eigen::Index i = 0; i < r.c_.size(); ++i) r.c_[i] = r.c_[i] * s;
    return r;
  }

  // Multiplicative inverse as a series at infinity. The result window reaches
  // down to lo - 2*leading_power, the deepest coefficient determined by the
  // input window.
  LaurentSeries inverse() const {
    int L = leading_power();
    const S& lead = c_[hi_ - L];
    int depth = L - lo_;       // number of correction terms available
    int rhi = -L, rlo = -L - depth;
    VecX<S> g = VecX<S>::Constant(depth + 1, S(0));
    g[0] = S(1) / lead;
    for (int k = 1; k <= depth; ++k) {
      S acc(0);
      for (int t = 1; t <= k; ++t) acc += c_[hi_ - (L - t)] * g[k - t];
      g[k] = -acc / lead;
    }
    return LaurentSeries(rhi, rlo, std::move(g));
  }

  // Largest power with a nonzero stored coefficient; throws if none.
  int leading_power() const {
    for (int t = hi_; t >= lo_; --t)
      if (!nhp::is_zero(c_[hi_ - t])) return t;
    throw std::domain_error("LaurentSeries: zero through entire window");
  }

 private:
  S coeff_or_zero(int power) const { return power > hi_ ? S(0) : c_[hi_ - power]; }
  int hi_, lo_;
  VecX<S> c_;  // c_[i] is the coefficient of z^{hi_ - i}
};

}  // namespace nhp

#endif  // NHP_SERIES_HPP
