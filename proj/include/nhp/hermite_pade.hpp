#ifndef NHP_HERMITE_PADE_HPP
#define NHP_HERMITE_PADE_HPP

#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "nhp/nikishin.hpp"
#include "nhp/series.hpp"

namespace nhp {

// Degree prescription (n_1, ..., n_m), all >= 0, not all zero. The zeroth
// cap n_0 = max_j(n_j) - 1 is derived; component j of the extended tuple
// (n_0, n_1, ..., n_m) caps deg a_j at component - 1, with cap 0 forcing the
// zero polynomial.
class MultiIndex {
 public:
  explicit MultiIndex(std::vector<int> n) : n_(std::move(n)) {
    if (n_.empty()) throw ConfigError("MultiIndex: empty");
    long tot = 0;
    for (int v : n_) {
      if (v < 0) throw ConfigError("MultiIndex: negative entry");
      tot += v;
    }
    if (tot == 0) throw ConfigError("MultiIndex: all entries zero");
  }

  int m() const { return static_cast<int>(n_.size()); }
  long total() const { return std::accumulate(n_.begin(), n_.end(), 0L); }
  int max_entry() const { return *std::max_element(n_.begin(), n_.end()); }
  int min_entry() const { return *std::min_element(n_.begin(), n_.end()); }
  int spread() const { return max_entry() - min_entry(); }
  int n0() const { return max_entry() - 1; }

  int entry(int j) const {  // 1-based
    if (j < 1 || j > m()) throw std::out_of_range("MultiIndex::entry");
    return n_[j - 1];
  }
  // cap(j) = number of free coefficients of a_j (degree cap + 1)
  int cap(int j) const { return j == 0 ? n0() : entry(j); }

  std::vector<int> full_components() const {  // (n_0, n_1, ..., n_m)
    std::vector<int> c(m() + 1);
    c[0] = n0();
    for (int j = 1; j <= m(); ++j) c[j] = entry(j);
    return c;
  }
  // last position (0-based over the extended tuple) attaining the minimum
  int jbar() const {
    auto c = full_components();
    int arg = 0;
    for (int j = 0; j < static_cast<int>(c.size()); ++j)
      if (c[j] <= c[arg]) arg = j;
    return arg;
  }

  const std::vector<int>& entries() const { return n_; }

  std::string str() const {
    std::ostringstream os;
    os << "(";
    for (int j = 0; j < m(); ++j) os << (j ? "," : "") << n_[j];
    os << ")";
    return os.str();
  }

  friend bool operator==(const MultiIndex& a, const MultiIndex& b) { return a.n_ == b.n_; }

 private:
  std::vector<int> n_;
};

// The interpolation data: zeros of the divisor polynomial w (real ones and
// conjugate pairs, with multiplicities), kept as roots so the "no zero on
// Delta_1" precondition is checkable without any root finding. Coefficients
// are expanded on demand and are always real.
template <class S>
class InterpolationScheme {
 public:
  struct RealRoot {
    S value;
    int multiplicity;
  };
  struct PairRoot {
    S re, im;  // the pair re +- i*im, im != 0
    int multiplicity;
  };

  InterpolationScheme() = default;  // w == 1

  void add_real_root(S value, int multiplicity = 1) {
    if (multiplicity < 1) throw ConfigError("InterpolationScheme: multiplicity must be >= 1");
    real_.push_back({std::move(value), multiplicity});
    cached_ = false;
  }
  void add_conjugate_pair(S re, S im, int multiplicity = 1) {
    if (multiplicity < 1) throw ConfigError("InterpolationScheme: multiplicity must be >= 1");
    if (nhp::is_zero(im))
      throw ConfigError("InterpolationScheme: conjugate pair needs nonzero imaginary part");
    pair_.push_back({std::move(re), std::move(im), multiplicity});
    cached_ = false;
  }

  bool trivial() const { return real_.empty() && pair_.empty(); }
  const std::vector<RealRoot>& real_roots() const { return real_; }
  const std::vector<PairRoot>& pair_roots() const { return pair_; }

  int degree() const {
    int d = 0;
    for (const auto& r : real_) d += r.multiplicity;
    for (const auto& p : pair_) d += 2 * p.multiplicity;
    return d;
  }

  const Polynomial<S>& weight() const {
    if (!cached_) {
      Polynomial<S> w = Polynomial<S>::constant(S(1));
      for (const auto& r : real_) w = w * poly_from_real_roots<S>({{r.value, r.multiplicity}});
      for (const auto& p : pair_) w = w * poly_from_conjugate_pair(p.re, p.im, p.multiplicity);
      weight_ = std::move(w);
      cached_ = true;
    }
    return weight_;
  }

  int asymptotic_conditions(const MultiIndex& n) const {
    return static_cast<int>(n.total()) + n.max_entry() - 2 - degree();
  }

  void validate(const MultiIndex& n, const Interval<S>& delta1) const {
    if (asymptotic_conditions(n) < 0) {
      std::ostringstream os;
      os << "InterpolationScheme: deg w = " << degree() << " exceeds the cap "
         << n.total() + n.max_entry() - 2 << " for index " << n.str();
      throw ConfigError(os.str());
    }
    for (const auto& r : real_)
      if (delta1.contains(r.value))
        throw ConfigError("InterpolationScheme: real zero " + scalar_str(r.value) +
                          " lies in the first support interval");
  }

 private:
  std::vector<RealRoot> real_;
  std::vector<PairRoot> pair_;
  mutable Polynomial<S> weight_ = Polynomial<S>::constant(S(1));
  mutable bool cached_ = true;
};

enum class SolvePath { ReducedOrthogonality, FullInterpolation };
enum class Normalization { MonicLast, UnitMaxCoeff };

template <class S>
struct HPSolution {
  MultiIndex index;
  std::vector<Polynomial<S>> a;  // a[0..m]
  Normalization normalization = Normalization::MonicLast;
  int nullspace_dim = 1;
  SolvePath path = SolvePath::ReducedOrthogonality;

  struct Residual {
    bool exact_mode = true;
    bool order_conditions_verified = false;  // remainder coefficients 1..|n|-1 vanish
    int remainder_zero_through = 0;
    double max_linear_residual = 0.0;  // float mode: |M v|_inf / scale
    bool weight_sign_mixed = false;
    std::vector<int> degrees;  // deg a_j, j = 0..m
  } residual;
};

namespace detail {

// Finite atoms stand in for measures of unbounded support size; |n| atoms per
// generator is what the zero-count and degree arguments consume.
template <class S>
void check_atom_budget(const NikishinSystem<S>& sys, const MultiIndex& n) {
  long need = n.total();
  for (int j = 1; j <= sys.size(); ++j)
    if (static_cast<long>(sys.generator(j).size()) < need) {
      std::ostringstream os;
      os << "atom budget: generator " << j << " has " << sys.generator(j).size() << " atoms, needs >= "
         << need << " for index " << n.str();
      throw AtomBudgetError(os.str());
    }
}

// kernel basis of M (cols x nullity) with scalar-appropriate rank threshold
template <class S>
std::pair<MatX<S>, int> kernel_of(const MatX<S>& M) {
  if (M.rows() == 0) {
    MatX<S> K = MatX<S>::Identity(M.cols(), M.cols());
    return {K, static_cast<int>(M.cols())};
  }
  Eigen::FullPivLU<MatX<S>> lu(M);
  if constexpr (!ScalarTraits<S>::is_exact) lu.setThreshold(ScalarTraits<S>::zero_gauge());
  int nullity = static_cast<int>(M.cols() - lu.rank());
  if (nullity == 0) return {MatX<S>(M.cols(), 0), 0};
  return {lu.kernel(), nullity};
}

// column offsets for the coefficient blocks of a_first..a_m (skipping caps of 0)
inline std::vector<int> block_offsets(const MultiIndex& n, int first, int& total_cols) {
  std::vector<int> off(n.m() + 1, -1);
  total_cols = 0;
  for (int j = first; j <= n.m(); ++j) {
    if (n.cap(j) == 0) continue;
    off[j] = total_cols;
    total_cols += n.cap(j);
  }
  return off;
}

}  // namespace detail

// Orthogonality system of the reduced path: row nu = 0..|n|-2, one column per
// coefficient x^p of a_k, entry = int x^(nu+p) d s_{1,k}(x) / w(x).
template <class S>
MatX<S> assemble_orthogonality(const NikishinSystem<S>& sys, const MultiIndex& n,
                               const InterpolationScheme<S>& scheme) {
  if (n.m() != sys.size()) throw ConfigError("assemble_orthogonality: index size != system size");
  detail::check_atom_budget(sys, n);
  scheme.validate(n, sys.delta(1));

  const int rows = static_cast<int>(n.total()) - 1;
  int cols = 0;
  auto off = detail::block_offsets(n, 1, cols);
  MatX<S> M = MatX<S>::Constant(rows, cols, S(0));
  const Polynomial<S>& w = scheme.weight();
  const Polynomial<S>* wp = scheme.trivial() ? nullptr : &w;
  for (int k = 1; k <= n.m(); ++k) {
    if (off[k] < 0) continue;
    VecX<S> mu = moments(sys.s(1, k), rows + n.entry(k) - 1, wp);
    for (int p = 0; p < n.entry(k); ++p)
      for (int nu = 0; nu < rows; ++nu) M(nu, off[k] + p) = mu[nu + p];
  }
  return M;
}

// a_0 via the divided-difference identity: the bezoutian of (w, a_j)
// contracted against the weighted moments of s_{1,j} over j = 1..m.
template <class S>
Polynomial<S> reconstruct_a0(const std::vector<Polynomial<S>>& a, const NikishinSystem<S>& sys,
                             const InterpolationScheme<S>& scheme) {
  const Polynomial<S>& w = scheme.weight();
  const Polynomial<S>* wp = scheme.trivial() ? nullptr : &w;
  Polynomial<S> a0;
  for (int j = 1; j < static_cast<int>(a.size()); ++j) {
    const Polynomial<S>& aj = a[j];
    if (aj.is_zero()) continue;
    MatX<S> B = bezoutian(w, aj);
    if (B.rows() == 0) continue;
    VecX<S> mu = moments(sys.s(1, j), static_cast<int>(B.cols()), wp);
    VecX<S> coeffs = B * mu;  // coefficient of z^r = sum_s B(r,s) mu_s
    a0 = a0 + Polynomial<S>(std::move(coeffs));
  }
  return a0;
}

// Linear form values A_j(z) = a_j(z) + sum_{k>j} a_k(z) shat_{j+1,k}(z).
template <class S, class T>
T linear_form(const HPSolution<S>& sol, const NikishinSystem<S>& sys, int j, const T& z) {
  const int m = sys.size();
  if (j < 0 || j > m) throw std::out_of_range("linear_form: j out of range");
  T acc = sol.a[j].is_zero() ? T(S(0)) : sol.a[j].eval(z);
  for (int k = j + 1; k <= m; ++k) {
    if (sol.a[k].is_zero()) continue;
    acc += sol.a[k].eval(z) * cauchy_transform(sys.s(j + 1, k), z);
  }
  return acc;
}

// Laurent coefficients of A_0 / w at infinity for powers z^{-1} .. z^{-K}.
// For a valid solution the first |n| - 1 of them vanish.
template <class S>
VecX<S> remainder_series(const HPSolution<S>& sol, const NikishinSystem<S>& sys,
                         const InterpolationScheme<S>& scheme, int K) {
  if (K < 1) throw std::invalid_argument("remainder_series: K must be >= 1");
  const int m = sys.size();
  const Polynomial<S>& w = scheme.weight();
  const int D = w.degree();
  int degmax = 0;
  for (const auto& p : sol.a) degmax = std::max(degmax, p.degree());
  const int depth = K + D + degmax + 8;

  LaurentSeries<S> A = LaurentSeries<S>::from_polynomial(sol.a[0], -depth);
  for (int k = 1; k <= m; ++k) {
    if (sol.a[k].is_zero()) continue;
    LaurentSeries<S> tail = LaurentSeries<S>::from_moment_coeffs(sys.cached_moments(1, k, depth));
    A = A + LaurentSeries<S>::from_polynomial(sol.a[k], -depth) * tail;
  }
  // the divisor window must reach deep enough to cover A's polynomial part
  LaurentSeries<S> winv = LaurentSeries<S>::from_polynomial(w, -depth).inverse();
  LaurentSeries<S> R = A * winv;
  VecX<S> out(K);
  for (int t = 1; t <= K; ++t) out[t - 1] = R.coeff(-t);
  return out;
}

// A_0(z)/w(z) as the Cauchy-type integral of A_1 against sigma_1 / w; equals
// linear_form(j=0)/w identically, which makes it the cross-check of choice.
template <class S, class T>
T remainder_integral(const HPSolution<S>& sol, const NikishinSystem<S>& sys,
                     const InterpolationScheme<S>& scheme, const T& z) {
  const Polynomial<S>& w = scheme.weight();
  const Measure<S>& sigma1 = sys.generator(1);
  T acc(S(0));
  for (const auto& at : sigma1.atoms()) {
    T a1 = linear_form(sol, sys, 1, T(at.x));
    S wx = w.eval(at.x);
    if (nhp::is_zero(wx))
      throw ConfigError("remainder_integral: w vanishes at an atom of sigma_1");
    T denom = (z - T(at.x)) * T(wx);
    acc += a1 * T(at.w) / denom;
  }
  return acc;
}

namespace detail {

// Rows of the direct interpolation system: decay conditions at infinity plus
// vanishing conditions (with multiplicity) at the zeros of w.
template <class S>
MatX<S> assemble_full(const NikishinSystem<S>& sys, const MultiIndex& n,
                      const InterpolationScheme<S>& scheme, const std::vector<int>& off, int cols) {
  const int m = n.m();
  const long total = n.total();
  const int nmax = n.max_entry();
  const int D = scheme.degree();
  const int n0 = n.n0();
  const int asy = scheme.asymptotic_conditions(n);
  const int rows = static_cast<int>(total) + nmax - 2;

  MatX<S> M = MatX<S>::Constant(rows, cols, S(0));
  int row = 0;

  // decay: coefficient of z^t in A_0 vanishes for t = n0-1 down to D-|n|+1
  std::vector<VecX<S>> mom(m + 1);
  int mom_count = static_cast<int>(total) + nmax + 4;
  for (int k = 1; k <= m; ++k)
    if (off[k] >= 0) mom[k] = sys.cached_moments(1, k, mom_count);
  for (int t = n0 - 1; t >= D - static_cast<int>(total) + 1; --t, ++row) {
    if (off[0] >= 0 && t >= 0 && t <= n0 - 1) M(row, off[0] + t) = S(1);
    for (int k = 1; k <= m; ++k) {
      if (off[k] < 0) continue;
      for (int p = 0; p < n.entry(k); ++p) {
        int idx = p - t - 1;
        if (idx >= 0) M(row, off[k] + p) = mom[k][idx];
      }
    }
  }
  if (row != asy) throw Error("assemble_full: decay row count mismatch");

  // interpolation at the zeros of w; complex pairs contribute the real and
  // imaginary parts of the conditions at one representative
  auto fill_point_rows = [&](auto zval, int multiplicity, bool complex_pair) {
    using T = decltype(zval);
    for (int q = 0; q < multiplicity; ++q) {
      std::vector<T> entries(cols, T(S(0)));
      // d^q/dz^q z^p at z
      auto dq_pow = [&](int p) -> T {
        if (q > p) return T(S(0));
        S fall(1);
        for (int i = 0; i < q; ++i) fall = fall * S(static_cast<long>(p - i));
        T pw(S(1));
        for (int i = 0; i < p - q; ++i) pw = pw * zval;
        return pw * T(fall);
      };
      if (off[0] >= 0)
        for (int p = 0; p < n0; ++p) entries[off[0] + p] = dq_pow(p);
      for (int k = 1; k <= m; ++k) {
        if (off[k] < 0) continue;
        // derivatives of the transform of s_{1,k} at z, orders 0..q
        std::vector<T> sh(q + 1);
        for (int i = 0; i <= q; ++i)
          sh[i] = i == 0 ? cauchy_transform(sys.s(1, k), zval)
                         : cauchy_transform_derivative(sys.s(1, k), zval, i);
        for (int p = 0; p < n.entry(k); ++p) {
          // Leibniz on z^p * shat
          T acc(S(0));
          S binom(1);
          for (int i = 0; i <= q; ++i) {
            if (i > 0) binom = binom * S(static_cast<long>(q - i + 1)) / S(static_cast<long>(i));
            // (d^i z^p) * shat^{(q-i)}
            if (i <= p) {
              S fall(1);
              for (int u = 0; u < i; ++u) fall = fall * S(static_cast<long>(p - u));
              T pw(S(1));
              for (int u = 0; u < p - i; ++u) pw = pw * zval;
              acc += T(binom * fall) * pw * sh[q - i];
            }
          }
          entries[off[k] + p] = acc;
        }
      }
      if constexpr (std::is_same_v<T, S>) {
        (void)complex_pair;
        for (int cidx = 0; cidx < cols; ++cidx) M(row, cidx) = entries[cidx];
        ++row;
      } else {
        for (int cidx = 0; cidx < cols; ++cidx) M(row, cidx) = entries[cidx].re;
        ++row;
        for (int cidx = 0; cidx < cols; ++cidx) M(row, cidx) = entries[cidx].im;
        ++row;
      }
    }
  };

  for (const auto& r : scheme.real_roots()) fill_point_rows(r.value, r.multiplicity, false);
  for (const auto& p : scheme.pair_roots())
    fill_point_rows(Complex<S>(p.re, p.im), p.multiplicity, true);
  if (row != rows) throw Error("assemble_full: row count mismatch");
  return M;
}

}  // namespace detail

// Solve the degree/decay/interpolation problem for the system's transforms.
// The reduced path eliminates a_0 through the orthogonality relations and
// reconstructs it afterwards; the full path discretizes the defining
// conditions directly. Both must agree up to the normalization; they are kept
// as mutual oracles.
template <class S>
HPSolution<S> solve_type1(const NikishinSystem<S>& sys, const MultiIndex& n,
                          const InterpolationScheme<S>& scheme = {},
                          SolvePath path = SolvePath::ReducedOrthogonality) {
  if (n.m() != sys.size()) throw ConfigError("solve_type1: index size != system size");
  detail::check_atom_budget(sys, n);
  scheme.validate(n, sys.delta(1));
  const int m = n.m();

  std::vector<Polynomial<S>> a(m + 1);
  int nullity = 0;
  double lin_residual = 0.0;

  auto residual_of = [](const MatX<S>& M, const VecX<S>& v) {
    if (M.rows() == 0) return 0.0;
    S scale(0);
    for (Eigen::Index i = 0; i < M.rows(); ++i)
      for (Eigen::Index j2 = 0; j2 < M.cols(); ++j2)
        if (abs(M(i, j2)) > scale) scale = abs(M(i, j2));
    VecX<S> r = M * v;
    S worst(0);
    for (Eigen::Index i = 0; i < r.size(); ++i)
      if (abs(r[i]) > worst) worst = abs(r[i]);
    if (nhp::is_zero(scale)) return to_double(worst);
    return to_double(worst / scale);
  };

  if (path == SolvePath::ReducedOrthogonality) {
    int cols = 0;
    auto off = detail::block_offsets(n, 1, cols);
    MatX<S> M = assemble_orthogonality(sys, n, scheme);
    auto [K, dim] = detail::kernel_of(M);
    nullity = dim;
    if (dim != 1) {
      std::ostringstream os;
      os << "solve_type1: nullspace dimension " << dim << " (rank " << cols - dim << ") for index "
         << n.str() << "; expected 1";
      throw DegeneracyError(os.str());
    }
    VecX<S> v = K.col(0);
    lin_residual = residual_of(M, v);
    for (int k = 1; k <= m; ++k) {
      if (off[k] < 0) continue;
      a[k] = Polynomial<S>(VecX<S>(v.segment(off[k], n.entry(k))));
    }
    a[0] = reconstruct_a0(a, sys, scheme);
  } else {
    int cols = 0;
    auto off = detail::block_offsets(n, 0, cols);
    MatX<S> M = detail::assemble_full(sys, n, scheme, off, cols);
    auto [K, dim] = detail::kernel_of(M);
    nullity = dim;
    if (dim != 1) {
      std::ostringstream os;
      os << "solve_type1(full): nullspace dimension " << dim << " for index " << n.str()
         << "; expected 1";
      throw DegeneracyError(os.str());
    }
    VecX<S> v = K.col(0);
    lin_residual = residual_of(M, v);
    for (int j = 0; j <= m; ++j) {
      if (off[j] < 0) continue;
      a[j] = Polynomial<S>(VecX<S>(v.segment(off[j], n.cap(j))));
    }
  }

  // structural degree guarantee: deg a_j = cap(j) - 1 throughout; in float
  // mode a leading coefficient drowned by the rest of its block counts as a
  // deficit too
  for (int j = 0; j <= m; ++j) {
    bool deficit = a[j].degree() != n.cap(j) - 1;
    if (!deficit && !ScalarTraits<S>::is_exact && !a[j].is_zero()) {
      S scale(0);
      for (int k = 0; k <= a[j].degree(); ++k)
        if (abs(a[j].coeff(k)) > scale) scale = abs(a[j].coeff(k));
      deficit = negligible(a[j].leading(), scale);
    }
    if (deficit) {
      std::ostringstream os;
      os << "solve_type1: deg a_" << j << " = " << a[j].degree() << " falls short of "
         << n.cap(j) - 1 << " for index " << n.str() << " (discretization too coarse?)";
      throw DegeneracyError(os.str());
    }
  }

  HPSolution<S> sol{n};
  sol.path = path;
  sol.nullspace_dim = nullity;

  // normalization: monic last block; fall back to the largest coefficient
  // when the index degenerates to n_m = 0
  if (n.entry(m) >= 1) {
    S lead = a[m].leading();
    for (auto& p : a) p = p / lead;
    sol.normalization = Normalization::MonicLast;
  } else {
    S best(0);
    for (const auto& p : a)
      for (int k = 0; k <= p.degree(); ++k)
        if (abs(p.coeff(k)) > abs(best)) best = p.coeff(k);
    for (auto& p : a) p = p / best;
    sol.normalization = Normalization::UnitMaxCoeff;
  }
  sol.a = std::move(a);

  sol.residual.exact_mode = ScalarTraits<S>::is_exact;
  sol.residual.max_linear_residual = lin_residual;
  for (int j = 0; j <= m; ++j) sol.residual.degrees.push_back(sol.a[j].degree());

  // order-of-contact audit straight from the series
  {
    const int want = static_cast<int>(n.total()) - 1;
    VecX<S> r = remainder_series(sol, sys, scheme, want + 1);
    int zeros = 0;
    for (int t = 0; t < want; ++t) {
      if (!negligible(r[t], r[want])) break;
      ++zeros;
    }
    sol.residual.remainder_zero_through = zeros;
    sol.residual.order_conditions_verified = (zeros >= want);
  }

  // weighted-measure sign audit (non-real zeros keep w positive on the real
  // line; real zeros off Delta_1 keep a constant sign there)
  if (!scheme.trivial()) {
    const Polynomial<S>& w = scheme.weight();
    int seen = 0;
    for (const auto& at : sys.generator(1).atoms()) {
      int sg = sign_of(w.eval(at.x));
      if (sg == 0) continue;
      if (seen == 0) seen = sg;
      else if (sg != seen) {
        sol.residual.weight_sign_mixed = true;
        break;
      }
    }
  }
  return sol;
}

}  // namespace nhp

#endif  // NHP_HERMITE_PADE_HPP
