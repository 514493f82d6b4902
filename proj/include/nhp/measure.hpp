#ifndef NHP_MEASURE_HPP
#define NHP_MEASURE_HPP

#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "nhp/polynomial.hpp"

namespace nhp {

// Interval of the extended real line (possibly unbounded on either side).
template <class S>
struct Interval {
  S lo{0}, hi{0};
  bool lo_unbounded = false, hi_unbounded = false;

  Interval() = default;
  Interval(S a, S b) : lo(std::move(a)), hi(std::move(b)) {
    if (!(lo < hi)) throw ConfigError("Interval: endpoints must satisfy lo < hi");
  }
  static Interval half_line_up(S a) {
    Interval I;
    I.lo = std::move(a);
    I.hi_unbounded = true;
    return I;
  }
  static Interval whole_line() {
    Interval I;
    I.lo_unbounded = I.hi_unbounded = true;
    return I;
  }

  bool bounded() const { return !lo_unbounded && !hi_unbounded; }
  bool contains(const S& x) const {
    if (!lo_unbounded && x < lo) return false;
    if (!hi_unbounded && hi < x) return false;
    return true;
  }
  bool contains_interior(const S& x) const {
    if (!lo_unbounded && !(lo < x)) return false;
    if (!hi_unbounded && !(x < hi)) return false;
    return true;
  }
  S length() const {
    if (!bounded()) throw ConfigError("Interval::length on unbounded interval");
    return hi - lo;
  }
  S midpoint() const {
    if (!bounded()) throw ConfigError("Interval::midpoint on unbounded interval");
    return (lo + hi) / S(2);
  }
};

// Intersection classification for consecutive supports: disjoint, a single
// shared endpoint (returned), or a genuine overlap (invalid for system chains).
template <class S>
struct IntervalMeet {
  enum Kind { Disjoint, SinglePoint, Overlap } kind;
  std::optional<S> point;
};

template <class S>
IntervalMeet<S> classify_meet(const Interval<S>& A, const Interval<S>& B) {
  // lower end of the intersection
  bool lo_unb = A.lo_unbounded && B.lo_unbounded;
  bool hi_unb = A.hi_unbounded && B.hi_unbounded;
  S lo(0), hi(0);
  if (!lo_unb) {
    if (A.lo_unbounded) lo = B.lo;
    else if (B.lo_unbounded) lo = A.lo;
    else lo = std::max(A.lo, B.lo);
  }
  if (!hi_unb) {
    if (A.hi_unbounded) hi = B.hi;
    else if (B.hi_unbounded) hi = A.hi;
    else hi = std::min(A.hi, B.hi);
  }
  if (lo_unb || hi_unb) return {IntervalMeet<S>::Overlap, std::nullopt};
  if (hi < lo) return {IntervalMeet<S>::Disjoint, std::nullopt};
  if (hi == lo) return {IntervalMeet<S>::SinglePoint, hi};
  return {IntervalMeet<S>::Overlap, std::nullopt};
}

// Gap between two disjoint bounded intervals (0 if they touch).
template <class S>
S interval_distance(const Interval<S>& A, const Interval<S>& B) {
  if (!A.bounded() || !B.bounded()) throw ConfigError("interval_distance: unbounded interval");
  if (A.hi < B.lo) return B.lo - A.hi;
  if (B.hi < A.lo) return A.lo - B.hi;
  return S(0);
}

enum class Provenance { Generator, Product, Discretized };

inline const char* provenance_str(Provenance p) {
  switch (p) {
    case Provenance::Generator: return "generator";
    case Provenance::Product: return "product";
    case Provenance::Discretized: return "discretized";
  }
  return "?";
}

// Finite signed atomic measure with constant-sign weights on a declared
// support interval. The computational stand-in for every measure in play.
template <class S>
class Measure {
 public:
  struct Atom {
    S x, w;
  };

  Measure(std::vector<Atom> atoms, Interval<S> support, Provenance prov, std::string name)
      : atoms_(std::move(atoms)), support_(std::move(support)), prov_(prov), name_(std::move(name)) {
    if (atoms_.empty()) throw ConfigError("Measure '" + name_ + "': needs at least one atom");
    sign_ = sign_of(atoms_.front().w);
    for (std::size_t i = 0; i < atoms_.size(); ++i) {
      const auto& a = atoms_[i];
      if (nhp::is_zero(a.w)) throw ConfigError("Measure '" + name_ + "': zero weight atom");
      if (sign_of(a.w) != sign_) throw ConfigError("Measure '" + name_ + "': weights change sign");
      if (!support_.contains(a.x))
        throw ConfigError("Measure '" + name_ + "': atom outside declared support");
      if (i > 0 && !(atoms_[i - 1].x < a.x))
        throw ConfigError("Measure '" + name_ + "': atoms not strictly increasing");
    }
  }

  std::size_t size() const { return atoms_.size(); }
  const Atom& atom(std::size_t i) const { return atoms_[i]; }
  const std::vector<Atom>& atoms() const { return atoms_; }
  const Interval<S>& support() const { return support_; }
  int sign() const { return sign_; }
  Provenance provenance() const { return prov_; }
  const std::string& name() const { return name_; }

  S total_mass() const {  // signed
    S t(0);
    for (const auto& a : atoms_) t += a.w;
    return t;
  }

  bool has_atom_at(const S& x) const {
    for (const auto& a : atoms_)
      if (a.x == x) return true;
    return false;
  }

 private:
  std::vector<Atom> atoms_;
  Interval<S> support_;
  int sign_;
  Provenance prov_;
  std::string name_;
};

// ---------------------------------------------------------------------------
// Cauchy transforms

namespace detail {
template <class S>
void check_pole(const Measure<S>& s, const S& x_atom, const S& dist_sq, const char* what) {
  if constexpr (ScalarTraits<S>::is_exact) {
    if (nhp::is_zero(dist_sq))
      throw PoleProximityError(std::string(what) + ": evaluation point hits an atom of '" + s.name() + "'");
  } else {
    S gauge = ScalarTraits<S>::zero_gauge();
    S scale = S(1) + x_atom * x_atom;
    if (dist_sq <= gauge * gauge * scale)
      throw PoleProximityError(std::string(what) + ": evaluation point within tolerance of an atom of '" +
                               s.name() + "'");
  }
}
}  // namespace detail

template <class S>
S cauchy_transform(const Measure<S>& s, const S& z) {
  S acc(0);
  for (const auto& a : s.atoms()) {
    S d = z - a.x;
    detail::check_pole(s, a.x, d * d, "cauchy_transform");
    acc += a.w / d;
  }
  return acc;
}

template <class S>
Complex<S> cauchy_transform(const Measure<S>& s, const Complex<S>& z) {
  Complex<S> acc;
  for (const auto& a : s.atoms()) {
    Complex<S> d = z - Complex<S>(a.x);
    detail::check_pole(s, a.x, d.abs2(), "cauchy_transform");
    acc += Complex<S>(a.w) / d;
  }
  return acc;
}

// order-th derivative of the transform: sum_i w_i (-1)^order order! / (z-x_i)^{order+1}
template <class S, class T>
T cauchy_transform_derivative(const Measure<S>& s, const T& z, int order) {
  T acc(S(0));
  S factor(1);
  for (int k = 2; k <= order; ++k) factor = factor * S(k);
  if (order % 2 == 1) factor = -factor;
  for (const auto& a : s.atoms()) {
    T d = z - T(a.x);
    T pw = d;
    for (int k = 0; k < order; ++k) pw = pw * d;
    acc += T(a.w) / pw;
  }
  return acc * T(factor);
}

// ---------------------------------------------------------------------------
// moments

// nu-th moment, optionally against 1/w (w must not vanish on the atoms).
template <class S>
S moment(const Measure<S>& s, int nu, const Polynomial<S>* w = nullptr) {
  if (nu < 0) throw std::invalid_argument("moment: negative order");
  S acc(0);
  for (const auto& a : s.atoms()) {
    S p(1);
    for (int k = 0; k < nu; ++k) p = p * a.x;
    if (w) {
      S wx = w->eval(a.x);
      if (negligible(wx, w->is_zero() ? S(1) : abs(w->leading())))
        throw ConfigError("moment: weight polynomial vanishes at an atom of '" + s.name() + "'");
      acc += a.w * p / wx;
    } else {
      acc += a.w * p;
    }
  }
  return acc;
}

template <class S>
VecX<S> moments(const Measure<S>& s, int count, const Polynomial<S>* w = nullptr) {
  VecX<S> out(count);
  std::vector<S> pw(s.size(), S(1));  // running powers per atom
  std::vector<S> wq(s.size(), S(1));
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (w) {
      S wx = w->eval(s.atom(i).x);
      if (negligible(wx, w->is_zero() ? S(1) : abs(w->leading())))
        throw ConfigError("moments: weight polynomial vanishes at an atom of '" + s.name() + "'");
      wq[i] = s.atom(i).w / wx;
    } else {
      wq[i] = s.atom(i).w;
    }
  }
  for (int nu = 0; nu < count; ++nu) {
    S acc(0);
    for (std::size_t i = 0; i < s.size(); ++i) {
      acc += wq[i] * pw[i];
      pw[i] = pw[i] * s.atom(i).x;
    }
    out[nu] = acc;
  }
  return out;
}

// ---------------------------------------------------------------------------
// measure products

// <a, b>: reweight a's atoms by the Cauchy transform of b. Requires the
// support chain rule (disjoint or one shared endpoint that is not a mass
// point of either factor) and at least two atoms per factor.
template <class S>
Measure<S> product_measure(const Measure<S>& a, const Measure<S>& b) {
  if (a.size() < 2 || b.size() < 2)
    throw ConfigError("product_measure: factors need >= 2 atoms ('" + a.name() + "' x '" + b.name() + "')");
  auto meet = classify_meet(a.support(), b.support());
  if (meet.kind == IntervalMeet<S>::Overlap)
    throw ConfigError("product_measure: supports of '" + a.name() + "' and '" + b.name() + "' overlap");
  if (meet.kind == IntervalMeet<S>::SinglePoint) {
    const S& pt = *meet.point;
    if (a.has_atom_at(pt) || b.has_atom_at(pt))
      throw ConfigError("product_measure: shared endpoint is a mass point of '" + a.name() + "' or '" +
                        b.name() + "'");
  }
  std::vector<typename Measure<S>::Atom> atoms;
  atoms.reserve(a.size());
  for (const auto& at : a.atoms()) {
    S f = cauchy_transform(b, at.x);
    atoms.push_back({at.x, at.w * f});
  }
  std::ostringstream name;
  name << "<" << a.name() << "," << b.name() << ">";
  return Measure<S>(std::move(atoms), a.support(), Provenance::Product, name.str());
}

}  // namespace nhp

#endif  // NHP_MEASURE_HPP
