#ifndef NHP_DIAGNOSTICS_HPP
#define NHP_DIAGNOSTICS_HPP

#include <cmath>
#include <complex>
#include <functional>
#include <thread>

#include "nhp/hermite_pade.hpp"
#include "nhp/moments.hpp"

namespace nhp {

// ---------------------------------------------------------------------------
// sign changes on an interval

template <class S>
struct SignChangeResult {
  int count = 0;
  std::vector<std::pair<S, S>> brackets;  // one per detected crossing
  bool grid_too_coarse = false;
};

// Counts sign alternations of f on (lo, hi) from a uniform sample, then
// tightens each crossing by bisection. Samples where f is singular or exactly
// zero are stepped over (a zero sample is itself recorded as a crossing).
// The count is a certified lower bound; a subsample pass over each bracket
// flags grids too coarse to separate neighbouring crossings.
template <class S>
SignChangeResult<S> count_sign_changes(const std::function<S(const S&)>& f, const S& lo, const S& hi,
                                       int grid, int refine_steps = 40) {
  if (!(lo < hi)) throw std::invalid_argument("count_sign_changes: empty interval");
  if (grid < 2) throw std::invalid_argument("count_sign_changes: grid must be >= 2");
  SignChangeResult<S> out;
  S h = (hi - lo) / S(static_cast<long>(grid + 1));

  std::vector<std::pair<S, int>> samples;  // interior points with nonzero sign
  for (int i = 1; i <= grid; ++i) {
    S x = lo + h * S(static_cast<long>(i));
    try {
      S v = f(x);
      int sg = sign_of(v);
      if (sg == 0) {
        out.brackets.push_back({x, x});
        ++out.count;
        continue;
      }
      samples.push_back({x, sg});
    } catch (const PoleProximityError&) {
      continue;
    }
  }

  auto refine = [&](S a, S b, int sa) {
    for (int it = 0; it < refine_steps; ++it) {
      S mid = (a + b) / S(2);
      int sm;
      try {
        sm = sign_of(f(mid));
      } catch (const PoleProximityError&) {
        break;
      }
      if (sm == 0) { a = b = mid; break; }
      if (sm == sa) a = mid;
      else b = mid;
    }
    return std::make_pair(a, b);
  };

  for (std::size_t i = 0; i + 1 < samples.size(); ++i) {
    if (samples[i].second * samples[i + 1].second < 0) {
      auto [a, b] = refine(samples[i].first, samples[i + 1].first, samples[i].second);
      out.brackets.push_back({a, b});
      ++out.count;
    } else if (samples[i].second * samples[i + 1].second > 0) {
      // even-order crossings hide from coarse grids; probe a few interior points
      S a = samples[i].first, b = samples[i + 1].first;
      S step = (b - a) / S(5);
      int last = samples[i].second, extra = 0;
      for (int t = 1; t <= 4; ++t) {
        try {
          int sg = sign_of(f(a + step * S(static_cast<long>(t))));
          if (sg != 0 && sg != last) { ++extra; last = sg; }
        } catch (const PoleProximityError&) {
        }
      }
      if (extra > 0) {
        out.grid_too_coarse = true;
        out.count += extra;
      }
    }
  }
  std::sort(out.brackets.begin(), out.brackets.end(),
            [](const auto& x, const auto& y) { return x.first < y.first; });
  return out;
}

// ---------------------------------------------------------------------------
// exterior zero counts by winding number

// Zeros of p strictly outside the circle |z - center| = radius, from
// deg p minus the winding number of p over the circle. The argument is
// tracked along adaptively refined arcs (each step < pi/2) and the final
// winding must land within 1/4 of an integer.
template <class S>
int exterior_zero_count(const Polynomial<S>& p, double center, double radius, int max_perturb = 3) {
  if (p.is_zero()) throw std::invalid_argument("exterior_zero_count: zero polynomial");
  if (p.degree() == 0) return 0;
  // normalize in exact arithmetic, then drop to double
  S big(0);
  for (int k = 0; k <= p.degree(); ++k)
    if (abs(p.coeff(k)) > big) big = abs(p.coeff(k));
  std::vector<std::complex<double>> c(p.degree() + 1);
  for (int k = 0; k <= p.degree(); ++k) c[k] = to_double(p.coeff(k) / big);
  auto eval = [&](std::complex<double> z) {
    std::complex<double> acc = 0;
    for (int k = p.degree(); k >= 0; --k) acc = acc * z + c[k];
    return acc;
  };

  double r = radius;
  for (int attempt = 0;; ++attempt) {
    struct Node {
      double theta, arg;
      std::complex<double> v;
    };
    const double tiny = 1e-13;
    bool on_contour = false;
    std::vector<Node> ring;
    int M = std::max(64, 16 * p.degree());
    ring.reserve(2 * M);
    for (int i = 0; i <= M; ++i) {
      double th = 2.0 * M_PI * i / M;
      std::complex<double> z(center + r * std::cos(th), r * std::sin(th));
      std::complex<double> v = eval(z);
      if (std::abs(v) < tiny) { on_contour = true; break; }
      ring.push_back({th, std::arg(v), v});
    }
    if (!on_contour) {
      // refine arcs until each argument step is < pi/2
      long guard = 200000;
      double total = 0;
      for (std::size_t i = 0; i + 1 < ring.size() && guard > 0;) {
        double d = ring[i + 1].arg - ring[i].arg;
        while (d > M_PI) d -= 2 * M_PI;
        while (d < -M_PI) d += 2 * M_PI;
        if (std::fabs(d) < M_PI / 2) {
          total += d;
          ++i;
          continue;
        }
        --guard;
        double thm = 0.5 * (ring[i].theta + ring[i + 1].theta);
        std::complex<double> z(center + r * std::cos(thm), r * std::sin(thm));
        std::complex<double> v = eval(z);
        if (std::abs(v) < tiny) { on_contour = true; break; }
        ring.insert(ring.begin() + static_cast<long>(i) + 1, {thm, std::arg(v), v});
      }
      if (guard <= 0)
        throw BudgetError("exterior_zero_count: argument tracking did not resolve");
      if (!on_contour) {
        double winding = total / (2 * M_PI);
        long inside = std::lround(winding);
        if (std::fabs(winding - static_cast<double>(inside)) >= 0.25)
          throw BudgetError("exterior_zero_count: winding residual exceeds certification bound");
        return p.degree() - static_cast<int>(inside);
      }
    }
    if (attempt >= max_perturb)
      throw Error("exterior_zero_count: zero on contour after radius perturbations");
    r = radius * (1.0 + (attempt + 1) * (1.0 / 64.0));
  }
}

// ---------------------------------------------------------------------------
// exterior-count audits against the min-component prediction

struct KappaAudit {
  int jbar = 0;
  bool skipped = false;       // jbar lands on the last block: prediction not asserted
  bool match = false;
  std::vector<int> observed;  // per j = 0..m
  std::vector<int> predicted;
  double center = 0, radius = 0;
};

template <class S>
KappaAudit kappa_audit(const NikishinSystem<S>& sys, const HPSolution<S>& sol, double center,
                       double radius) {
  const int m = sys.size();
  KappaAudit out;
  out.center = center;
  out.radius = radius;
  auto comp = sol.index.full_components();
  out.jbar = sol.index.jbar();
  if (out.jbar == m) {
    out.skipped = true;
    return out;
  }
  out.predicted.resize(m + 1);
  for (int j = 0; j < m; ++j) out.predicted[j] = comp[j] - comp[out.jbar];
  out.predicted[m] = comp[m] - comp[out.jbar] - 1;
  out.observed.resize(m + 1);
  for (int j = 0; j <= m; ++j)
    out.observed[j] = sol.a[j].is_zero() ? 0 : exterior_zero_count(sol.a[j], center, radius);
  out.match = (out.observed == out.predicted);
  return out;
}

// Default contour: centered on the last support interval, radius covering it
// plus three quarters of the gap to its neighbour.
template <class S>
std::pair<double, double> default_contour(const NikishinSystem<S>& sys) {
  const int m = sys.size();
  if (m < 2) throw ConfigError("default_contour: needs at least two generators");
  const auto& dm = sys.delta(m);
  const auto& dprev = sys.delta(m - 1);
  if (!dm.bounded() || !dprev.bounded())
    throw ConfigError("default_contour: bounded supports required");
  double center = to_double(dm.midpoint());
  double radius = 0.75 * to_double(interval_distance(dprev, dm)) + 0.5 * to_double(dm.length());
  return {center, radius};
}

// ---------------------------------------------------------------------------
// convergence sweeps

template <class S>
struct SweepSpec {
  std::vector<MultiIndex> indices;
  std::vector<InterpolationScheme<S>> schemes;  // empty: all trivial; else one per index
  std::vector<Complex<S>> grid;
  std::vector<int> targets;  // j values; empty: 0..m-1
  int threads = 1;

  void validate(const NikishinSystem<S>& sys) const {
    if (indices.empty()) throw ConfigError("sweep: no multi-indices");
    if (grid.empty()) throw ConfigError("sweep: empty evaluation grid");
    if (!schemes.empty() && schemes.size() != indices.size())
      throw ConfigError("sweep: schemes must be absent or one per index");
    long prev = 0;
    for (const auto& n : indices) {
      if (n.m() != sys.size()) throw ConfigError("sweep: index size != system size");
      if (n.total() <= prev) throw ConfigError("sweep: |n| must increase strictly");
      prev = n.total();
    }
    const auto& dm = sys.delta(sys.size());
    for (const auto& z : grid) {
      if (z.is_real() && dm.contains(z.re))
        throw ConfigError("sweep: grid point lies in the last support interval");
    }
    for (int j : targets)
      if (j < 0 || j >= sys.size()) throw ConfigError("sweep: target j out of range");
  }
};

template <class S>
struct ConvergenceReport {
  struct Row {
    long abs_n;
    int j;
    double e;  // sup-grid error of a_j/a_m against the reversed-system transform
    double f;  // sup-grid magnitude of A_j/a_m
  };
  std::vector<Row> rows;  // ordered by (|n|, j)
  struct Fit {
    int j;
    double delta_hat;       // exp(slope of log e vs |n|), last half
    double r2;
    long monotone_from;     // smallest |n| from which e decreases strictly (-1: never)
  };
  std::vector<Fit> fits;
  std::vector<std::string> index_errors;
  int attempted = 0, solved = 0;
  int max_spread = 0;            // sup of max(n_j) - min(n_j) over the sequence
  bool last_supports_touch = false;  // convergence then leans on the trailing moment growth
  bool trailing_carleman_divergent = true;
};

namespace detail {

template <class S>
double sup_abs(const std::vector<Complex<S>>& vals) {
  // exact comparисон on |.|^2, one sqrt at the end
  S best(0);
  for (const auto& v : vals) {
    S a2 = v.abs2();
    if (a2 > best) best = a2;
  }
  return std::sqrt(to_double(best));
}

inline std::pair<double, double> fit_loglinear(const std::vector<std::pair<long, double>>& pts) {
  // least squares of log(y) against x over the provided points
  int n = static_cast<int>(pts.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (auto [x, y] : pts) {
    double ly = std::log(std::max(y, 1e-300));
    sx += x; sy += ly; sxx += static_cast<double>(x) * x; sxy += x * ly;
  }
  double den = n * sxx - sx * sx;
  if (den == 0) return {0.0, 0.0};
  double slope = (n * sxy - sx * sy) / den;
  double mean = sy / n, ssr = 0, sst = 0;
  for (auto [x, y] : pts) {
    double ly = std::log(std::max(y, 1e-300));
    double fit = mean + slope * (x - sx / n);
    ssr += (ly - fit) * (ly - fit);
    sst += (ly - mean) * (ly - mean);
  }
  double r2 = sst > 0 ? 1.0 - ssr / sst : 1.0;
  return {slope, r2};
}

}  // namespace detail

// Runs the solver along the index sequence and tabulates sup-grid errors of
// the polynomial ratios against the reversed-system transforms, plus the
// linear-form magnitudes. Per-index failures are recorded and skipped.
template <class S>
ConvergenceReport<S> convergence_sweep(const NikishinSystem<S>& sys, const SweepSpec<S>& spec) {
  spec.validate(sys);
  const int m = sys.size();
  std::vector<int> targets = spec.targets;
  if (targets.empty())
    for (int j = 0; j < m; ++j) targets.push_back(j);

  struct Slot {
    bool ok = false;
    std::string error;
    std::vector<double> e, f;  // per target
  };
  std::vector<Slot> slots(spec.indices.size());

  auto work = [&](std::size_t i) {
    Slot& slot = slots[i];
    try {
      const InterpolationScheme<S> scheme =
          spec.schemes.empty() ? InterpolationScheme<S>{} : spec.schemes[i];
      HPSolution<S> sol = solve_type1(sys, spec.indices[i], scheme);
      for (int j : targets) {
        std::vector<Complex<S>> diffs, forms;
        int sgn = ((m - j) % 2 == 0) ? 1 : -1;
        for (const auto& z : spec.grid) {
          Complex<S> am = sol.a[m].eval(z);
          if (nhp::is_zero(am.abs2()))
            throw DegeneracyError("sweep: a_m vanishes at a grid point");
          Complex<S> ratio = sol.a[j].eval(z) / am;
          Complex<S> truth = cauchy_transform(sys.s(m, j + 1), z) * Complex<S>(S(sgn));
          diffs.push_back(ratio - truth);
          forms.push_back(linear_form(sol, sys, j, z) / am);
        }
        slot.e.push_back(detail::sup_abs(diffs));
        slot.f.push_back(detail::sup_abs(forms));
      }
      slot.ok = true;
    } catch (const Error& err) {
      slot.error = err.what();
    }
  };

  int nthreads = std::max(1, spec.threads);
  if (nthreads == 1) {
    for (std::size_t i = 0; i < slots.size(); ++i) work(i);
  } else {
    std::vector<std::thread> pool;
    std::atomic<std::size_t> next{0};
    for (int t = 0; t < nthreads; ++t)
      pool.emplace_back([&] {
        for (std::size_t i = next.fetch_add(1); i < slots.size(); i = next.fetch_add(1)) work(i);
      });
    for (auto& th : pool) th.join();
  }

  ConvergenceReport<S> rep;
  rep.attempted = static_cast<int>(slots.size());
  for (const auto& n : spec.indices) rep.max_spread = std::max(rep.max_spread, n.spread());
  if (m >= 2 && sys.delta(m - 1).bounded() && sys.delta(m).bounded()) {
    rep.last_supports_touch = nhp::is_zero(interval_distance(sys.delta(m - 1), sys.delta(m)));
    if (rep.last_supports_touch) {
      // the separation hypothesis fails; record the trailing generator's
      // moment-growth heuristic instead
      int orders = static_cast<int>(std::min<std::size_t>(sys.generator(m).size(), 24));
      auto t = MomentTable<S>::from_measure(sys.generator(m), orders + 1);
      rep.trailing_carleman_divergent = carleman_sum(t, orders).divergent_heuristic;
    }
  }
  for (std::size_t i = 0; i < slots.size(); ++i) {
    if (!slots[i].ok) {
      rep.index_errors.push_back(spec.indices[i].str() + ": " + slots[i].error);
      continue;
    }
    ++rep.solved;
    for (std::size_t tj = 0; tj < targets.size(); ++tj)
      rep.rows.push_back({spec.indices[i].total(), targets[tj], slots[i].e[tj], slots[i].f[tj]});
  }

  for (std::size_t tj = 0; tj < targets.size(); ++tj) {
    std::vector<std::pair<long, double>> pts;
    for (std::size_t i = 0; i < slots.size(); ++i)
      if (slots[i].ok) pts.push_back({spec.indices[i].total(), slots[i].e[tj]});
    typename ConvergenceReport<S>::Fit fit{targets[tj], 1.0, 0.0, -1};
    if (pts.size() >= 2) {
      std::vector<std::pair<long, double>> tail(pts.begin() + pts.size() / 2, pts.end());
      if (tail.size() < 2) tail = pts;
      auto [slope, r2] = detail::fit_loglinear(tail);
      fit.delta_hat = std::exp(slope);
      fit.r2 = r2;
      for (std::size_t i = pts.size(); i-- > 1;) {
        if (!(pts[i].second < pts[i - 1].second)) {
          fit.monotone_from = pts[i].first;
          break;
        }
        if (i == 1) fit.monotone_from = pts[0].first;
      }
    }
    rep.fits.push_back(fit);
  }
  return rep;
}

// ---------------------------------------------------------------------------
// transform product identity

struct IdentityCheckResult {
  double max_abs_residual = 0.0;
  bool exact_zero = true;
};

// 0 = (-1)^(m-j) shat_{m,j+1} + sum_{k=j+1}^{m-1} (-1)^(m-k) shat_{m,k+1} shat_{j+1,k}
//     + shat_{j+1,m},  evaluated off the supports.
template <class S>
IdentityCheckResult identity_check(const NikishinSystem<S>& sys, int j,
                                   const std::vector<Complex<S>>& points) {
  const int m = sys.size();
  if (j < 0 || j >= m) throw std::invalid_argument("identity_check: j out of range");
  IdentityCheckResult out;
  S worst(0);
  for (const auto& z : points) {
    int sgn = ((m - j) % 2 == 0) ? 1 : -1;
    Complex<S> acc = cauchy_transform(sys.s(m, j + 1), z) * Complex<S>(S(sgn));
    for (int k = j + 1; k <= m - 1; ++k) {
      int sk = ((m - k) % 2 == 0) ? 1 : -1;
      acc += cauchy_transform(sys.s(m, k + 1), z) * cauchy_transform(sys.s(j + 1, k), z) *
             Complex<S>(S(sk));
    }
    acc += cauchy_transform(sys.s(j + 1, m), z);
    S a2 = acc.abs2();
    if (!nhp::is_zero(a2)) out.exact_zero = false;
    if (a2 > worst) worst = a2;
  }
  out.max_abs_residual = std::sqrt(to_double(worst));
  return out;
}

// ---------------------------------------------------------------------------
// reciprocal-transform ratio identity

struct RatioIdentityResult {
  double max_abs_residual = 0.0;
  bool exact_zero = true;
  int order_checked = 0;
};

// shat_{1,k}/shat_{1,1} - mass(s_{1,k})/mass(s_{1,1})
//   + <tau_{1,1}, <s_{2,k}, sigma_1>>^ == 0,
// verified through the series coefficients of z^0 .. z^-N at infinity. The
// tau series comes from the triangular inverse-moment system; the transform
// values of tau at the product atoms come from the defining decomposition
// 1/shat = l + tauhat. Exact atoms make every term exact.
template <class S>
RatioIdentityResult ratio_identity_residual(const NikishinSystem<S>& sys, int k, int N) {
  if (sys.size() < 2 || k < 2 || k > sys.size())
    throw std::invalid_argument("ratio_identity_residual: need 2 <= k <= m");
  const Measure<S>& sigma1 = sys.generator(1);
  const int depth = N + 6;

  MomentTable<S> t1 = MomentTable<S>::from_measure(sigma1, depth);
  InverseMoments<S> inv = inverse_moments(t1, N + 2);
  LaurentSeries<S> recip = inv.reciprocal_series();

  LaurentSeries<S> s1k = LaurentSeries<S>::from_moment_coeffs(moments(sys.s(1, k), depth));
  LaurentSeries<S> ratio = s1k * recip;

  S mass_ratio = sys.s(1, k).total_mass() / sigma1.total_mass();

  // <tau, g>^ with g = <s_{2,k}, sigma_1>: moments against the atomic g
  Measure<S> g = product_measure(sys.s(2, k), sigma1);
  VecX<S> mu = VecX<S>::Constant(N + 1, S(0));
  for (const auto& at : g.atoms()) {
    S tau_at = inv.tau_hat_at(sigma1, at.x);
    S xpow(1);  // x^nu
    std::vector<S> xpows(N + 1);
    for (int nu = 0; nu <= N; ++nu) {
      xpows[nu] = xpow;
      xpow = xpow * at.x;
    }
    for (int nu = 0; nu <= N; ++nu) {
      S inner(0);
      for (int r = 0; r < nu; ++r) inner += inv.d[r] * xpows[nu - 1 - r];
      inner -= xpows[nu] * tau_at;
      mu[nu] += at.w * inner;
    }
  }
  LaurentSeries<S> taug = LaurentSeries<S>::from_moment_coeffs(mu);

  RatioIdentityResult out;
  out.order_checked = N;
  S worst(0);
  for (int t = 0; t >= -N; --t) {
    S c = ratio.coeff(t) + taug.coeff(t);
    if (t == 0) c -= mass_ratio;
    if (!nhp::is_zero(c)) out.exact_zero = false;
    if (abs(c) > worst) worst = abs(c);
  }
  out.max_abs_residual = std::fabs(to_double(worst));
  return out;
}

// ---------------------------------------------------------------------------
// order of contact at infinity

struct ContactOrder {
  int order = 0;             // (q shat - p)/w = O(z^-order), sharp unless lower_bound_only
  bool lower_bound_only = false;
};

// Largest verified T with (q shat - p)/w = O(z^-T), scanned through series
// coefficients down to the given depth. rel_tol = 0 demands exact zeros.
template <class S>
ContactOrder contact_order(const Polynomial<S>& q, const Polynomial<S>& p, const Measure<S>& s,
                           const Polynomial<S>& w, int depth, double rel_tol = 0.0) {
  if (q.is_zero()) throw std::invalid_argument("contact_order: q must be nonzero");
  if (w.is_zero()) throw std::invalid_argument("contact_order: w must be nonzero");
  const int D = w.degree();
  const int span = depth + D + q.degree() + p.degree() + 8;
  LaurentSeries<S> shat = LaurentSeries<S>::from_moment_coeffs(moments(s, span));
  LaurentSeries<S> num = LaurentSeries<S>::from_polynomial(q, -span) * shat -
                         LaurentSeries<S>::from_polynomial(p, -span);
  LaurentSeries<S> R = num * LaurentSeries<S>::from_polynomial(w, -span).inverse();

  double scale = 0;
  for (int t = R.hi(); t >= -depth; --t) scale = std::max(scale, std::fabs(to_double(R.coeff(t))));
  ContactOrder out;
  for (int t = R.hi(); t >= -depth; --t) {
    const S c = R.coeff(t);
    bool zero = rel_tol == 0.0 ? nhp::is_zero(c) : std::fabs(to_double(c)) <= rel_tol * scale;
    if (!zero) {
      out.order = -t;
      return out;
    }
  }
  out.order = depth + 1;
  out.lower_bound_only = true;
  return out;
}

}  // namespace nhp

#endif  // NHP_DIAGNOSTICS_HPP
