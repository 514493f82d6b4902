#ifndef NHP_POLYNOMIAL_HPP
#define NHP_POLYNOMIAL_HPP

#include <Eigen/Dense>

#include <initializer_list>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "nhp/errors.hpp"
#include "nhp/scalar.hpp"

namespace nhp {

template <class S>
using VecX = Eigen::Matrix<S, Eigen::Dynamic, 1>;
template <class S>
using MatX = Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic>;

// Dense univariate polynomial, coefficients ascending. The zero polynomial
// stores no coefficients and reports degree -1.
template <class S>
class Polynomial {
 public:
  Polynomial() = default;
  explicit Polynomial(VecX<S> coeffs) : c_(std::move(coeffs)) { trim(); }
  Polynomial(std::initializer_list<S> coeffs) {
    c_.resize(static_cast<Eigen::Index>(coeffs.size()));
    Eigen::Index i = 0;
    for (const S& v : coeffs) c_[i++] = v;
    trim();
  }

  static Polynomial zero() { return Polynomial(); }
  static Polynomial constant(S v) {
    Polynomial p;
    if (!nhp::is_zero(v)) {
      p.c_.resize(1);
      p.c_[0] = std::move(v);
    }
    return p;
  }
  static Polynomial identity() { return monomial(1); }  // z
  static Polynomial monomial(int k, S coeff = S(1)) {
    Polynomial p;
    if (nhp::is_zero(coeff)) return p;
    p.c_ = VecX<S>::Constant(k + 1, S(0));
    p.c_[k] = std::move(coeff);
    return p;
  }

  int degree() const { return static_cast<int>(c_.size()) - 1; }
  bool is_zero() const { return c_.size() == 0; }
  const VecX<S>& coeffs() const { return c_; }

  // Coefficient of z^k; zero outside the stored range.
  S coeff(int k) const {
    if (k < 0 || k > degree()) return S(0);
    return c_[k];
  }
  const S& leading() const {
    if (is_zero()) throw std::logic_error("Polynomial::leading on zero polynomial");
    return c_[c_.size() - 1];
  }

  template <class T>
  T eval(const T& z) const {
    T acc(S(0));
    for (Eigen::Index k = c_.size(); k-- > 0;) acc = acc * z + T(c_[k]);
    return acc;
  }

  Polynomial derivative() const {
    if (degree() < 1) return Polynomial();
    VecX<S> d(c_.size() - 1);
    for (Eigen::Index k = 1; k < c_.size(); ++k) d[k - 1] = c_[k] * S(static_cast<long>(k));
    return Polynomial(std::move(d));
  }

  Polynomial monic() const {
    if (is_zero()) throw std::logic_error("Polynomial::monic on zero polynomial");
    return *this / leading();
  }

  Polynomial operator-() const {
    Polynomial r(*this);
    for (Eigen::Index k = 0; k < r.c_.size(); ++k) r.c_[k] = -r.c_[k];
    return r;
  }

  friend Polynomial operator+(const Polynomial& a, const Polynomial& b) {
    VecX<S> r = VecX<S>::Constant(std::max(a.c_.size(), b.c_.size()), S(0));
    for (Eigen::Index k = 0; k < a.c_.size(); ++k) r[k] += a.c_[k];
    for (Eigen::Index k = 0; k < b.c_.size(); ++k) r[k] += b.c_[k];
    return Polynomial(std::move(r));
  }
  friend Polynomial operator-(const Polynomial& a, const Polynomial& b) { return a + (-b); }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    if (a.is_zero() || b.is_zero()) return Polynomial();
    VecX<S> r = VecX<S>::Constant(a.c_.size() + b.c_.size() - 1, S(0));
    for (Eigen::Index i = 0; i < a.c_.size(); ++i)
      for (Eigen::Index j = 0; j < b.c_.size(); ++j) r[i + j] += a.c_[i] * b.c_[j];
    return Polynomial(std::move(r));
  }
  friend Polynomial operator*(const Polynomial& a, const S& s) {
    if (nhp::is_zero(s)) return Polynomial();
    Polynomial r(a);
    for (Eigen::Index k = 0; k < r.c_.size(); ++k) r.c_[k] = r.c_[k] * s;
    r.trim();
    return r;
  }
  friend Polynomial operator*(const S& s, const Polynomial& a) { return a * s; }
  friend Polynomial operator/(const Polynomial& a, const S& s) {
    if (nhp::is_zero(s)) throw std::domain_error("Polynomial: division by zero scalar");
    Polynomial r(a);
    for (Eigen::Index k = 0; k < r.c_.size(); ++k) r.c_[k] = r.c_[k] / s;
    return r;
  }

  friend bool operator==(const Polynomial& a, const Polynomial& b) {
    if (a.c_.size() != b.c_.size()) return false;
    for (Eigen::Index k = 0; k < a.c_.size(); ++k)
      if (!(a.c_[k] == b.c_[k])) return false;
    return true;
  }
  friend bool operator!=(const Polynomial& a, const Polynomial& b) { return !(a == b); }

  std::string str(const std::string& var = "z") const {
    if (is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (int k = degree(); k >= 0; --k) {
      if (nhp::is_zero(c_[k])) continue;
      if (!first) os << " + ";
      os << scalar_str(c_[k]);
      if (k >= 1) os << "*" << var;
      if (k >= 2) os << "^" << k;
      first = false;
    }
    return os.str();
  }

 private:
  void trim() {
    Eigen::Index n = c_.size();
    while (n > 0 && nhp::is_zero(c_[n - 1])) --n;
    c_.conservativeResize(n);
  }
  VecX<S> c_;
};

// ---------------------------------------------------------------------------
// construction helpers

template <class S>
Polynomial<S> poly_from_real_roots(const std::vector<std::pair<S, int>>& roots) {
  Polynomial<S> p = Polynomial<S>::constant(S(1));
  for (const auto& [r, mult] : roots) {
    Polynomial<S> lin{-r, S(1)};
    for (int i = 0; i < mult; ++i) p = p * lin;
  }
  return p;
}

// (x - (a+bi))(x - (a-bi)) = x^2 - 2a x + (a^2 + b^2)
template <class S>
Polynomial<S> poly_from_conjugate_pair(const S& re, const S& im, int mult = 1) {
  Polynomial<S> quad{re * re + im * im, S(-2) * re, S(1)};
  Polynomial<S> p = Polynomial<S>::constant(S(1));
  for (int i = 0; i < mult; ++i) p = p * quad;
  return p;
}

// ---------------------------------------------------------------------------
// euclidean structure (field coefficients)

template <class S>
std::pair<Polynomial<S>, Polynomial<S>> poly_divmod(const Polynomial<S>& a, const Polynomial<S>& b) {
  if (b.is_zero()) throw std::domain_error("poly_divmod: division by zero polynomial");
  if (a.degree() < b.degree()) return {Polynomial<S>(), a};
  VecX<S> rem(a.degree() + 1);
  for (int k = 0; k <= a.degree(); ++k) rem[k] = a.coeff(k);
  int db = b.degree();
  VecX<S> quo = VecX<S>::Constant(a.degree() - db + 1, S(0));
  for (int k = a.degree(); k >= db; --k) {
    S q = rem[k] / b.leading();
    if (nhp::is_zero(q)) continue;
    quo[k - db] = q;
    for (int j = 0; j <= db; ++j) rem[k - db + j] -= q * b.coeff(j);
  }
  return {Polynomial<S>(std::move(quo)), Polynomial<S>(std::move(rem))};
}

template <class S>
Polynomial<S> poly_gcd_monic(Polynomial<S> a, Polynomial<S> b) {
  if (a.is_zero()) return b.is_zero() ? b : b.monic();
  if (b.is_zero()) return a.monic();
  // Monic normalization after every step keeps exact coefficients small and
  // float remainders scaled.
  a = a.monic();
  b = b.monic();
  while (!b.is_zero()) {
    Polynomial<S> r = poly_divmod(a, b).second;
    a = std::move(b);
    if (!r.is_zero()) {
      // In float mode a remainder that is negligible against the inputs is a
      // numerically vanished one.
      if (!ScalarTraits<S>::is_exact) {
        S scale = abs(a.leading());
        bool all_small = true;
        for (int k = 0; k <= r.degree(); ++k)
          if (!negligible(r.coeff(k), scale)) { all_small = false; break; }
        if (all_small) r = Polynomial<S>();
      }
    }
    b = r.is_zero() ? std::move(r) : r.monic();
  }
  return a;
}

template <class S>
Polynomial<S> squarefree_part(const Polynomial<S>& p) {
  if (p.degree() <= 1) return p;
  Polynomial<S> g = poly_gcd_monic(p, p.derivative());
  if (g.degree() <= 0) return p;
  return poly_divmod(p, g).first;
}

// Yun decomposition p = prod u_i^i (u_i squarefree, pairwise coprime).
// Returns u_1, u_2, ... ; constant factors dropped.
template <class S>
std::vector<Polynomial<S>> squarefree_decomposition(const Polynomial<S>& p) {
  std::vector<Polynomial<S>> out;
  if (p.degree() <= 0) return out;
  Polynomial<S> g = poly_gcd_monic(p, p.derivative());
  if (g.degree() == 0) {
    out.push_back(p.monic());
    return out;
  }
  Polynomial<S> w = poly_divmod(p, g).first;          // product of distinct factors
  Polynomial<S> y = poly_divmod(p.derivative(), g).first;
  Polynomial<S> z = y - w.derivative();
  while (!w.is_zero() && w.degree() > 0) {
    Polynomial<S> u = poly_gcd_monic(w, z);
    out.push_back(u);
    w = poly_divmod(w, u).first;
    y = poly_divmod(z, u).first;
    z = y - w.derivative();
  }
  return out;
}

// ---------------------------------------------------------------------------
// bezoutian

// Coefficient matrix B with (p(z) q(x) - p(x) q(z)) / (z - x) =
// sum_{r,s} B(r,s) z^r x^s. Dimensions D x D with D = max(deg p, deg q).
template <class S>
MatX<S> bezoutian(const Polynomial<S>& p, const Polynomial<S>& q) {
  if (p.is_zero() && q.is_zero())
    throw std::invalid_argument("bezoutian: both polynomials are zero");
  int D = std::max(p.degree(), q.degree());
  if (D <= 0) return MatX<S>(0, 0);
  // Numerator N_r(x) = p_r q(x) - q_r p(x), r = 0..D; divide by (z - x) as a
  // polynomial in z by synthetic division: B_{D-1} = N_D, B_{r-1} = N_r + x B_r.
  auto row = [&](int r) {
    VecX<S> n = VecX<S>::Constant(D + 1, S(0));
    for (int s = 0; s <= D; ++s) n[s] = p.coeff(r) * q.coeff(s) - q.coeff(r) * p.coeff(s);
    return n;
  };
  MatX<S> B = MatX<S>::Constant(D, D, S(0));
  VecX<S> acc = row(D);  // B_{D-1}(x), degree < D by antisymmetry (acc[D] = 0)
  for (int r = D - 1; r >= 0; --r) {
    for (int s = 0; s < D; ++s) B(r, s) = acc[s];
    if (r == 0) break;
    VecX<S> next = row(r);
    for (int s = D; s >= 1; --s) next[s] += acc[s - 1];  // + x * B_r
    acc = std::move(next);
  }
  return B;
}

// ---------------------------------------------------------------------------
// real root isolation: Sturm counts + sign-change bisection

template <class S>
struct IsolatedRoot {
  S lo, hi;          // certified bracket (lo == hi when the root is exact)
  S value;           // exact root or bracket midpoint
  int multiplicity;  // w.r.t. the original polynomial
  bool exact;
};

namespace detail {

template <class S>
std::vector<Polynomial<S>> sturm_chain(const Polynomial<S>& f) {
  std::vector<Polynomial<S>> chain;
  chain.push_back(f);
  chain.push_back(f.derivative());
  while (!chain.back().is_zero() && chain.back().degree() > 0) {
    Polynomial<S> r = poly_divmod(chain[chain.size() - 2], chain.back()).second;
    if (r.is_zero()) break;
    // normalize by a positive factor only: the sign pattern is the payload
    chain.push_back(-(r / abs(r.leading())));
  }
  return chain;
}

template <class S>
int sign_variations(const std::vector<Polynomial<S>>& chain, const S& x) {
  int var = 0, last = 0;
  for (const auto& f : chain) {
    if (f.is_zero()) continue;
    int s = sign_of(f.eval(x));
    if (s == 0) continue;
    if (last != 0 && s != last) ++var;
    last = s;
  }
  return var;
}

// number of distinct roots of the (squarefree) chain head in (a, b]
template <class S>
int sturm_count(const std::vector<Polynomial<S>>& chain, const S& a, const S& b) {
  return sign_variations(chain, a) - sign_variations(chain, b);
}

}  // namespace detail

// All real roots of p in the closed interval [lo, hi], certified to bracket
// width <= tol. Exact scalars give exact counts; float counts are exact when
// roots are simple and separated by more than 2 tol.
template <class S>
std::vector<IsolatedRoot<S>> real_roots_in_interval(const Polynomial<S>& p, const S& lo, const S& hi,
                                                    const S& tol, long max_bisections = 100000) {
  if (p.is_zero()) throw std::invalid_argument("real_roots_in_interval: zero polynomial");
  if (!(lo < hi)) throw std::invalid_argument("real_roots_in_interval: empty interval");
  if (!(S(0) < tol)) throw std::invalid_argument("real_roots_in_interval: tol must be positive");

  std::vector<Polynomial<S>> squarefree_factors;
  if constexpr (ScalarTraits<S>::is_exact)
    squarefree_factors = squarefree_decomposition(p);

  auto multiplicity_of = [&](const S& a, const S& b, const S& point, bool exact) -> int {
    if constexpr (ScalarTraits<S>::is_exact) {
      for (std::size_t i = 0; i < squarefree_factors.size(); ++i) {
        const auto& u = squarefree_factors[i];
        if (u.degree() <= 0) continue;
        if (exact) {
          if (nhp::is_zero(u.eval(point))) return static_cast<int>(i + 1);
        } else if (sign_of(u.eval(a)) * sign_of(u.eval(b)) < 0) {
          return static_cast<int>(i + 1);
        }
      }
      return 1;
    } else {
      // derivative-order scan at the approximate root
      S scale = abs(p.leading());
      Polynomial<S> d = p;
      for (int order = 0; order <= p.degree(); ++order) {
        if (!negligible(d.eval(point), scale)) return std::max(order, 1);
        d = d.derivative();
      }
      return 1;
    }
  };

  Polynomial<S> f = squarefree_part(p);
  if (f.degree() == 0) return {};
  std::vector<IsolatedRoot<S>> out;
  long budget = max_bisections;

  // endpoint roots, then strictly interior ones
  for (const S* e : {&lo, &hi}) {
    if (nhp::is_zero(f.eval(*e))) {
      out.push_back({*e, *e, *e, multiplicity_of(*e, *e, *e, true), true});
      f = poly_divmod(f, Polynomial<S>{-*e, S(1)}).first;
    }
  }
  if (f.degree() >= 1) {
    auto chain = detail::sturm_chain(f);
    struct Bracket { S a, b; int count; };
    std::vector<Bracket> work{{lo, hi, detail::sturm_count(chain, lo, hi)}};
    std::vector<Bracket> unresolved;
    S two(2);
    while (!work.empty()) {
      Bracket br = work.back();
      work.pop_back();
      if (br.count <= 0) continue;
      if (budget-- <= 0) {
        unresolved.push_back(br);
        continue;
      }
      S mid = (br.a + br.b) / two;
      if (nhp::is_zero(f.eval(mid))) {
        out.push_back({mid, mid, mid, multiplicity_of(mid, mid, mid, true), true});
        Polynomial<S> lin{-mid, S(1)};
        f = poly_divmod(f, lin).first;
        chain = detail::sturm_chain(f);
        if (br.count > 1) work.push_back({br.a, br.b, detail::sturm_count(chain, br.a, br.b)});
        continue;
      }
      int left = detail::sturm_count(chain, br.a, mid);
      int right = br.count - left;
      auto emit_or_split = [&](const S& a, const S& b, int cnt) {
        if (cnt == 0) return;
        if (cnt == 1 && b - a <= tol) {
          S v = (a + b) / two;
          out.push_back({a, b, v, multiplicity_of(a, b, v, false), false});
        } else {
          work.push_back({a, b, cnt});
        }
      };
      emit_or_split(br.a, mid, left);
      emit_or_split(mid, br.b, right);
    }
    if (!unresolved.empty()) {
      std::ostringstream os;
      os << "real_roots_in_interval: budget exhausted; unresolved brackets:";
      for (const auto& br : unresolved)
        os << " [" << scalar_str(br.a) << ", " << scalar_str(br.b) << "]x" << br.count;
      throw BudgetError(os.str());
    }
  }
  std::sort(out.begin(), out.end(),
            [](const IsolatedRoot<S>& x, const IsolatedRoot<S>& y) { return x.value < y.value; });
  return out;
}

}  // namespace nhp

#endif  // NHP_POLYNOMIAL_HPP
