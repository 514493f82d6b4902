#ifndef NHP_QUADRATURE_HPP
#define NHP_QUADRATURE_HPP

#include <Eigen/Eigenvalues>

#include <string>
#include <vector>

#include "nhp/measure.hpp"

namespace nhp {

// Gauss rules are produced from the three-term recurrence of the monic
// orthogonal polynomials: eigenvalue seeds in double (Golub-Welsch), then
// Newton refinement at working precision. Nodes/weights come back as
// BigFloat and are converted to the ambient scalar (dyadic-exact for
// Rational).

struct Recurrence {
  std::vector<BigFloat> a;  // a_0 .. a_{N-1}
  std::vector<BigFloat> b;  // b_0 = total weight mass, b_1 .. b_{N-1}
};

namespace detail {

inline Recurrence legendre_recurrence(int N) {
  Recurrence r;
  r.a.assign(N, BigFloat(0));
  r.b.resize(N);
  r.b[0] = BigFloat(2);
  for (int k = 1; k < N; ++k)
    r.b[k] = BigFloat(static_cast<long>(k) * k) / BigFloat(4L * k * k - 1);
  return r;
}

inline Recurrence jacobi_recurrence(int N, const BigFloat& al, const BigFloat& be) {
  Recurrence r;
  r.a.resize(N);
  r.b.resize(N);
  BigFloat one(1), two(2), ab = al + be;
  r.a[0] = (be - al) / (ab + two);
  // b_0 = 2^(a+b+1) G(a+1) G(b+1) / G(a+b+2)
  BigFloat p, e = ab + one;
  mpfr_ui_pow(p.raw(), 2, e.raw(), MPFR_RNDN);
  r.b[0] = p * tgamma(al + one) * tgamma(be + one) / tgamma(ab + two);
  if (N > 1) {
    r.a[1] = (be * be - al * al) / ((two + ab) * (two + ab + two));
    r.b[1] = BigFloat(4) * (al + one) * (be + one) / ((ab + two) * (ab + two) * (ab + BigFloat(3)));
  }
  for (int k = 2; k < N; ++k) {
    BigFloat kk(static_cast<long>(k));
    BigFloat d = two * kk + ab;
    r.a[k] = (be * be - al * al) / (d * (d + two));
    r.b[k] = BigFloat(4) * kk * (kk + al) * (kk + be) * (kk + ab) / (d * d * (d + one) * (d - one));
  }
  return r;
}

inline Recurrence laguerre_recurrence(int N, const BigFloat& al) {
  Recurrence r;
  r.a.resize(N);
  r.b.resize(N);
  r.b[0] = tgamma(al + BigFloat(1));
  for (int k = 0; k < N; ++k) {
    r.a[k] = BigFloat(2L * k + 1) + al;
    if (k >= 1) r.b[k] = BigFloat(static_cast<long>(k)) * (BigFloat(static_cast<long>(k)) + al);
  }
  return r;
}

// monic p_N and p_N' at x via the recurrence
inline void eval_recurrence(const Recurrence& r, int N, const BigFloat& x, BigFloat& p, BigFloat& dp) {
  BigFloat pm1(0), pm0(1), dm1(0), dm0(0);
  for (int k = 0; k < N; ++k) {
    BigFloat t = x - r.a[k];
    BigFloat pk = t * pm0 - (k == 0 ? BigFloat(0) : r.b[k] * pm1);
    BigFloat dk = pm0 + t * dm0 - (k == 0 ? BigFloat(0) : r.b[k] * dm1);
    pm1 = pm0; pm0 = pk;
    dm1 = dm0; dm0 = dk;
  }
  p = pm0;
  dp = dm0;
}

}  // namespace detail

struct GaussRule {
  std::vector<BigFloat> nodes, weights;
};

inline GaussRule gauss_rule(const Recurrence& r) {
  const int N = static_cast<int>(r.a.size());
  GaussRule out;
  out.nodes.resize(N);
  out.weights.resize(N);

  // Golub-Welsch seeds in double precision.
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(N, N);
  for (int k = 0; k < N; ++k) {
    J(k, k) = r.a[k].to_double();
    if (k + 1 < N) {
      double off = std::sqrt(r.b[k + 1].to_double());
      J(k, k + 1) = J(k + 1, k) = off;
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
  if (es.info() != Eigen::Success) throw Error("gauss_rule: eigen solve failed");

  for (int i = 0; i < N; ++i) {
    BigFloat x(es.eigenvalues()[i]);
    BigFloat p(0), dp(0);
    for (int it = 0; it < 10; ++it) {  // quadratic convergence; 10 is generous
      detail::eval_recurrence(r, N, x, p, dp);
      if (p.is_zero() || dp.is_zero()) break;
      x -= p / dp;
    }
    out.nodes[i] = x;
    // weight = b0 / sum_{k<N} q_k(x)^2 with orthonormal q_k
    BigFloat qm1(0), qk(BigFloat(1) / sqrt(r.b[0])), ssum = qk * qk;
    for (int k = 0; k + 1 < N; ++k) {
      BigFloat qn = ((x - r.a[k]) * qk - (k == 0 ? BigFloat(0) : sqrt(r.b[k]) * qm1)) / sqrt(r.b[k + 1]);
      qm1 = qk;
      qk = qn;
      ssum += qk * qk;
    }
    out.weights[i] = BigFloat(1) / ssum;
  }
  return out;
}

template <class S>
S to_scalar(const BigFloat& x) {
  if constexpr (ScalarTraits<S>::is_exact)
    return x.to_rational();
  else
    return x;
}

// ---------------------------------------------------------------------------
// density discretizations

// Lebesgue density on [lo, hi] (total mass hi - lo). Gauss-Legendre by
// default; the midpoint rule gives rational atoms for exact-mode work.
enum class UniformRule { Gauss, Midpoint };

template <class S>
Measure<S> discretize_uniform(const Interval<S>& I, int N, UniformRule rule = UniformRule::Gauss,
                              std::string name = "uniform") {
  if (!I.bounded()) throw ConfigError("discretize_uniform: interval must be bounded");
  if (N < 1) throw ConfigError("discretize_uniform: need N >= 1");
  std::vector<typename Measure<S>::Atom> atoms(N);
  if (rule == UniformRule::Midpoint) {
    S h = I.length() / S(static_cast<long>(N));
    for (int i = 0; i < N; ++i) {
      atoms[i].x = I.lo + h * S(2L * i + 1) / S(2);
      atoms[i].w = h;
    }
  } else {
    GaussRule g = gauss_rule(detail::legendre_recurrence(N));
    S mid = I.midpoint(), half = I.length() / S(2);
    for (int i = 0; i < N; ++i) {
      atoms[i].x = mid + half * to_scalar<S>(g.nodes[i]);
      atoms[i].w = half * to_scalar<S>(g.weights[i]);
    }
  }
  return Measure<S>(std::move(atoms), I, Provenance::Discretized, std::move(name));
}

// (hi - x)^alpha (x - lo)^beta dx on [lo, hi]
template <class S>
Measure<S> discretize_jacobi(const Interval<S>& I, int N, const std::string& alpha,
                             const std::string& beta, std::string name = "jacobi") {
  if (!I.bounded()) throw ConfigError("discretize_jacobi: interval must be bounded");
  if (N < 1) throw ConfigError("discretize_jacobi: need N >= 1");
  BigFloat al = BigFloat::parse(alpha), be = BigFloat::parse(beta);
  if (al <= BigFloat(-1) || be <= BigFloat(-1))
    throw ConfigError("discretize_jacobi: parameters must exceed -1");
  GaussRule g = gauss_rule(detail::jacobi_recurrence(N, al, be));
  S mid = I.midpoint(), half = I.length() / S(2);
  // weight scale ((hi-lo)/2)^(alpha+beta+1)
  BigFloat hb = to_bigfloat(half), e = al + be + BigFloat(1), scale;
  mpfr_pow(scale.raw(), hb.raw(), e.raw(), MPFR_RNDN);
  std::vector<typename Measure<S>::Atom> atoms(N);
  for (int i = 0; i < N; ++i) {
    atoms[i].x = mid + half * to_scalar<S>(g.nodes[i]);
    atoms[i].w = to_scalar<S>(g.weights[i] * scale);
  }
  return Measure<S>(std::move(atoms), I, Provenance::Discretized, std::move(name));
}

// x^alpha e^-x dx on [lo, infinity), shifted by lo
template <class S>
Measure<S> discretize_laguerre(const S& lo, int N, const std::string& alpha,
                               std::string name = "laguerre") {
  if (N < 1) throw ConfigError("discretize_laguerre: need N >= 1");
  BigFloat al = BigFloat::parse(alpha);
  if (al <= BigFloat(-1)) throw ConfigError("discretize_laguerre: parameter must exceed -1");
  GaussRule g = gauss_rule(detail::laguerre_recurrence(N, al));
  std::vector<typename Measure<S>::Atom> atoms(N);
  for (int i = 0; i < N; ++i) {
    atoms[i].x = lo + to_scalar<S>(g.nodes[i]);
    atoms[i].w = to_scalar<S>(g.weights[i]);
  }
  return Measure<S>(std::move(atoms), Interval<S>::half_line_up(lo), Provenance::Discretized,
                    std::move(name));
}

}  // namespace nhp

#endif  // NHP_QUADRATURE_HPP
