#ifndef NHP_MOMENTS_HPP
#define NHP_MOMENTS_HPP

#include <cmath>
#include <string>
#include <vector>

#include "nhp/measure.hpp"
#include "nhp/series.hpp"

namespace nhp {

template <class S>
struct MomentTable {
  std::string id;
  VecX<S> c;  // c[nu] = nu-th power moment

  int max_order() const { return static_cast<int>(c.size()) - 1; }

  static MomentTable from_measure(const Measure<S>& s, int count, const Polynomial<S>* w = nullptr) {
    return MomentTable{s.name(), moments(s, count, w)};
  }
  static MomentTable from_values(std::string id, VecX<S> values) {
    return MomentTable{std::move(id), std::move(values)};
  }

  LaurentSeries<S> cauchy_series() const { return LaurentSeries<S>::from_moment_coeffs(c); }
};

// Coefficients of the reciprocal transform: 1/shat(z) = l(z) + that(z) with
// l(z) = d_m2 z + d_m1 and that(z) = sum_n d[n] z^{-n-1}. They solve the
// triangular convolution system against the input moments:
//   1 = d_m2 c_0
//   0 = d_m2 c_1 + d_m1 c_0
//   0 = d_m2 c_{n+2} + d_m1 c_{n+1} + d_0 c_n + ... + d_n c_0 .
template <class S>
struct InverseMoments {
  S d_m2, d_m1;
  VecX<S> d;  // d[0..N]

  // l(z) + that(z) as a series at infinity
  LaurentSeries<S> reciprocal_series() const {
    int N = static_cast<int>(d.size());
    VecX<S> coeffs(2 + N);
    coeffs[0] = d_m2;
    coeffs[1] = d_m1;
    for (int i = 0; i < N; ++i) coeffs[2 + i] = d[i];
    return LaurentSeries<S>(1, -N, std::move(coeffs));
  }

  Polynomial<S> linear_part() const { return Polynomial<S>{d_m1, d_m2}; }

  // that at a point, evaluated through the defining identity (exact wherever
  // the underlying transform is)
  template <class T>
  T tau_hat_at(const Measure<S>& sigma, const T& z) const {
    T sh = cauchy_transform(sigma, z);
    return T(S(1)) / sh - (T(z) * T(d_m2) + T(d_m1));
  }
};

template <class S>
InverseMoments<S> inverse_moments(const MomentTable<S>& table, int N) {
  if (N < 0) throw std::invalid_argument("inverse_moments: N must be >= 0");
  if (table.max_order() < N + 2)
    throw std::invalid_argument("inverse_moments: table needs orders 0.." + std::to_string(N + 2));
  const VecX<S>& c = table.c;
  if (nhp::is_zero(c[0])) throw DegeneracyError("inverse_moments: c_0 = 0, system is singular");
  InverseMoments<S> out;
  out.d_m2 = S(1) / c[0];
  out.d_m1 = -(out.d_m2 * c[1]) / c[0];
  out.d.resize(N + 1);
  for (int n = 0; n <= N; ++n) {
    S acc = out.d_m2 * c[n + 2] + out.d_m1 * c[n + 1];
    for (int k = 0; k < n; ++k) acc += out.d[k] * c[n - k];
    out.d[n] = -acc / c[0];
  }
  return out;
}

// Determinant of the (n+2) x (n+2) lower Hessenberg moment matrix: first
// column (c_1, ..., c_{n+2}), constant diagonal c_1, superdiagonal c_0,
// entry (i, j) = c_{i-j+1}. Computed by first-row expansion, which couples
// the determinant with its first-column-shifted companions:
//   G(d, r) = c_{1+r} G(d-1, 0) - c_0 G(d-1, r+1),  G(1, r) = c_{1+r}.
template <class S>
S hessenberg_omega(const MomentTable<S>& table, int n) {
  if (n < 0) throw std::invalid_argument("hessenberg_omega: n must be >= 0");
  if (table.max_order() < n + 2)
    throw std::invalid_argument("hessenberg_omega: table needs orders 0.." + std::to_string(n + 2));
  const VecX<S>& c = table.c;
  const int dim = n + 2;
  std::vector<S> prev(dim), cur;
  for (int r = 0; r < dim; ++r) prev[r] = c[1 + r];  // G(1, r)
  for (int d = 2; d <= dim; ++d) {
    cur.assign(dim - d + 1, S(0));
    for (int r = 0; r <= dim - d; ++r) cur[r] = c[1 + r] * prev[0] - c[0] * prev[r + 1];
    prev = cur;
  }
  return prev[0];
}

// Audit route for the same determinant: enumerate the permutation expansion
// of the Hessenberg matrix directly. Also reports the number of nonvanishing
// expansion terms (2^{n+1}) and checks that every term has n+2 factors whose
// indices sum to n+2. Exponential in n; meant for small n only.
template <class S>
struct OmegaExpansionAudit {
  S value;
  long term_count = 0;
  bool index_sums_ok = true;
  bool factor_counts_ok = true;
};

template <class S>
OmegaExpansionAudit<S> hessenberg_omega_by_expansion(const MomentTable<S>& table, int n) {
  if (n < 0 || table.max_order() < n + 2)
    throw std::invalid_argument("hessenberg_omega_by_expansion: table needs orders 0..n+2");
  const int dim = n + 2;
  if (dim > 9) throw std::invalid_argument("hessenberg_omega_by_expansion: n too large for enumeration");
  const VecX<S>& c = table.c;
  std::vector<int> perm(dim);
  for (int i = 0; i < dim; ++i) perm[i] = i;
  OmegaExpansionAudit<S> out{S(0)};
  do {
    // entry (i, j) = c_{i-j+1}, zero above the superdiagonal
    bool nonzero_pattern = true;
    int index_sum = 0;
    for (int i = 0; i < dim && nonzero_pattern; ++i) {
      int idx = i - perm[i] + 1;
      if (idx < 0) nonzero_pattern = false;
      else index_sum += idx;
    }
    if (!nonzero_pattern) continue;
    // structurally admissible term: count it (entries are c_k symbols, all
    // nonzero for genuine moment tables), then accumulate its value
    ++out.term_count;
    if (index_sum != dim) out.index_sums_ok = false;
    int inv = 0;
    for (int i = 0; i < dim; ++i)
      for (int j = i + 1; j < dim; ++j)
        if (perm[i] > perm[j]) ++inv;
    S term(inv % 2 == 0 ? 1 : -1);
    for (int i = 0; i < dim; ++i) term = term * c[i - perm[i] + 1];
    out.value += term;
    // every permutation product has exactly dim factors by construction
  } while (std::next_permutation(perm.begin(), perm.end()));
  return out;
}

// ---------------------------------------------------------------------------
// Carleman diagnostics

inline double log2_abs(const Rational& q) {
  if (q.is_zero()) throw std::domain_error("log2_abs: zero");
  long en = 0, ed = 0;
  double dn = mpz_get_d_2exp(&en, q.numerator().get_mpz_t());
  double dd = mpz_get_d_2exp(&ed, q.denominator().get_mpz_t());
  return (std::log2(std::fabs(dn)) + static_cast<double>(en)) -
         (std::log2(std::fabs(dd)) + static_cast<double>(ed));
}

inline double log2_abs(const BigFloat& x) {
  if (x.is_zero()) throw std::domain_error("log2_abs: zero");
  long e = 0;
  double d = mpfr_get_d_2exp(&e, x.raw(), MPFR_RNDN);
  return std::log2(std::fabs(d)) + static_cast<double>(e);
}

struct CarlemanReport {
  std::vector<double> terms;         // |c_n|^{-1/(2n)}, n = 1..N
  std::vector<double> partial_sums;  // running sums (monotone nondecreasing)
  double sum = 0.0;
  // least-squares fit log(term) ~ intercept + slope * log(n) on the tail;
  // the series behaves like sum n^slope, so slope >= -1 reads as divergent
  double decay_slope = 0.0;
  bool divergent_heuristic = false;
};

template <class S>
CarlemanReport carleman_sum(const MomentTable<S>& table, int N) {
  if (N < 1 || table.max_order() < N)
    throw std::invalid_argument("carleman_sum: need moments through order N >= 1");
  CarlemanReport rep;
  rep.terms.reserve(N);
  rep.partial_sums.reserve(N);
  double acc = 0.0;
  for (int n = 1; n <= N; ++n) {
    if (nhp::is_zero(table.c[n]))
      throw DegeneracyError("carleman_sum: zero moment at order " + std::to_string(n));
    double l2 = log2_abs(table.c[n]);
    double term = std::exp2(-l2 / (2.0 * n));
    rep.terms.push_back(term);
    acc += term;
    rep.partial_sums.push_back(acc);
  }
  rep.sum = acc;
  // fit on the last half
  int lo = N / 2, cnt = N - lo;
  if (cnt >= 2) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (int i = lo; i < N; ++i) {
      double x = std::log(static_cast<double>(i + 1));
      double y = std::log(std::max(rep.terms[i], 1e-300));
      sx += x; sy += y; sxx += x * x; sxy += x * y;
    }
    double denom = cnt * sxx - sx * sx;
    rep.decay_slope = denom != 0 ? (cnt * sxy - sx * sy) / denom : 0.0;
    rep.divergent_heuristic = rep.decay_slope >= -1.02;
  } else {
    rep.decay_slope = 0.0;
    rep.divergent_heuristic = true;
  }
  return rep;
}

}  // namespace nhp

#endif  // NHP_MOMENTS_HPP
