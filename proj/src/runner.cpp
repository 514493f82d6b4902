#include "runner.hpp"

#include <filesystem>
#include <fstream>
#include <optional>
#include <random>

#include "nhp/quadrature.hpp"
#include "nhp/serialize.hpp"

namespace nhp {

namespace fs = std::filesystem;

namespace {

template <class S>
struct Realized {
  NikishinSystem<S> system;
  std::vector<MultiIndex> indices;
  InterpolationScheme<S> scheme;
  std::vector<Complex<S>> grid;
};

template <class S>
Measure<S> realize_generator(const GeneratorSpec& g, int pos) {
  std::string name = "sigma" + std::to_string(pos);
  if (g.family == "laguerre") {
    if (g.hi != "inf") throw ConfigError("generators: laguerre interval must be [lo, inf]");
    return discretize_laguerre<S>(ScalarTraits<S>::parse(g.lo), g.atoms, g.alpha, name);
  }
  if (g.hi == "inf") throw ConfigError("generators: only laguerre supports an unbounded interval");
  Interval<S> I(ScalarTraits<S>::parse(g.lo), ScalarTraits<S>::parse(g.hi));
  if (g.family == "uniform")
    return discretize_uniform<S>(I, g.atoms,
                                 g.rule == "midpoint" ? UniformRule::Midpoint : UniformRule::Gauss,
                                 name);
  if (g.family == "jacobi") return discretize_jacobi<S>(I, g.atoms, g.alpha, g.beta, name);
  // atoms
  std::vector<typename Measure<S>::Atom> atoms;
  for (const auto& [x, w] : g.atom_list)
    atoms.push_back({ScalarTraits<S>::parse(x), ScalarTraits<S>::parse(w)});
  std::sort(atoms.begin(), atoms.end(), [](const auto& a, const auto& b) { return a.x < b.x; });
  return Measure<S>(std::move(atoms), I, Provenance::Generator, name);
}

template <class S>
Realized<S> realize(const RunConfig& cfg) {
  std::vector<Measure<S>> gens;
  for (std::size_t i = 0; i < cfg.generators.size(); ++i)
    gens.push_back(realize_generator<S>(cfg.generators[i], static_cast<int>(i + 1)));
  Realized<S> r{build_system<S>(std::move(gens)), {}, {}, {}};
  for (const auto& v : cfg.indices) r.indices.push_back(MultiIndex(v));
  for (const auto& [root, mult] : cfg.w_real)
    r.scheme.add_real_root(ScalarTraits<S>::parse(root), mult);
  for (const auto& [re, im, mult] : cfg.w_pairs)
    r.scheme.add_conjugate_pair(ScalarTraits<S>::parse(re), ScalarTraits<S>::parse(im), mult);
  for (const auto& [re, im] : cfg.grid)
    r.grid.push_back(Complex<S>(ScalarTraits<S>::parse(re), ScalarTraits<S>::parse(im)));
  return r;
}

std::string index_tag(const MultiIndex& n) {
  std::string t = "n";
  for (std::size_t i = 0; i < n.entries().size(); ++i)
    t += (i ? "_" : "") + std::to_string(n.entries()[i]);
  return t;
}

void ensure_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw ConfigError("output: cannot create directory '" + dir + "': " + ec.message());
}

// ---------------------------------------------------------------------------
// solve

template <class S>
int run_solve_t(const RunConfig& cfg, const std::string& outdir, std::ostream& log) {
  Realized<S> r = realize<S>(cfg);
  ensure_dir(outdir);

  // system dump plus moment tables for every generator
  std::ofstream(outdir + "/system.json") << system_to_json(r.system).dump(2) << "\n";
  long max_total = 0;
  for (const auto& n : r.indices) max_total = std::max(max_total, n.total() + n.max_entry());
  for (int j = 1; j <= r.system.size(); ++j) {
    int orders = static_cast<int>(std::min<long>(2 * max_total + 2,
                                                 static_cast<long>(r.system.generator(j).size())));
    auto table = MomentTable<S>::from_measure(r.system.generator(j), orders + 1);
    std::ofstream csv(outdir + "/moments_sigma" + std::to_string(j) + ".csv");
    moment_table_csv(csv, table);
  }

  std::ofstream summary(outdir + "/summary.txt");
  for (const auto& n : r.indices) {
    HPSolution<S> sol = solve_type1(r.system, n, r.scheme);
    json doc = solution_to_json(sol, r.scheme);

    // zero-location audit of the first linear form
    const auto& d1 = r.system.delta(1);
    auto sc = count_sign_changes<S>(
        [&](const S& x) { return linear_form(sol, r.system, 1, x); }, d1.lo, d1.hi,
        std::max(64, 8 * static_cast<int>(n.total())));
    doc["a1_sign_changes"] = sc.count;

    std::string path = outdir + "/solution_" + index_tag(n) + ".json";
    std::ofstream(path) << doc.dump(2) << "\n";

    std::ostringstream line;
    line << "index " << n.str() << ": degrees [";
    for (std::size_t j = 0; j < sol.residual.degrees.size(); ++j)
      line << (j ? "," : "") << sol.residual.degrees[j];
    line << "], remainder zero through " << sol.residual.remainder_zero_through << " (of "
         << n.total() - 1 << "), a1 sign changes " << sc.count << ", nullspace "
         << sol.nullspace_dim << ", wrote " << path;
    log << line.str() << "\n";
    summary << line.str() << "\n";
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------
// sweep

template <class S>
int run_sweep_t(const RunConfig& cfg, const std::string& outdir, std::ostream& log) {
  Realized<S> r = realize<S>(cfg);
  SweepSpec<S> spec;
  spec.indices = r.indices;
  if (!r.scheme.trivial())
    spec.schemes.assign(r.indices.size(), r.scheme);
  spec.grid = r.grid;
  spec.targets = cfg.targets;
  spec.threads = cfg.threads;
  spec.validate(r.system);

  ConvergenceReport<S> rep = convergence_sweep(r.system, spec);

  ensure_dir(outdir);
  {
    std::ofstream csv(outdir + "/report.csv");
    report_csv(csv, rep);
  }
  std::ofstream(outdir + "/report.json") << report_to_json(rep, spec).dump(2) << "\n";

  for (const auto& row : rep.rows)
    log << "|n|=" << row.abs_n << " j=" << row.j << " e=" << fmt_double(row.e)
        << " f=" << fmt_double(row.f) << "\n";
  for (const auto& fit : rep.fits)
    log << "j=" << fit.j << " delta_hat=" << fmt_double(fit.delta_hat) << " r2=" << fmt_double(fit.r2)
        << " monotone_from=" << fit.monotone_from << "\n";
  for (const auto& e : rep.index_errors) log << "error: " << e << "\n";
  log << "solved " << rep.solved << "/" << rep.attempted << "\n";

  if (rep.solved * 5 < rep.attempted * 4) return kExitPartialSweep;  // < 80%
  return kExitOk;
}

// ---------------------------------------------------------------------------
// verify

struct CheckLog {
  std::ostream& log;
  json items = json::array();
  bool all_ok = true;

  void emit(const std::string& name, bool ok, const std::string& detail) {
    log << (ok ? "[PASS] " : "[FAIL] ") << name << (detail.empty() ? "" : ": " + detail) << "\n";
    items.push_back({{"name", name}, {"pass", ok}, {"detail", detail}});
    all_ok = all_ok && ok;
  }
  void note(const std::string& name, const std::string& detail) {
    log << "[NOTE] " << name << ": " << detail << "\n";
    items.push_back({{"name", name}, {"pass", true}, {"detail", detail}, {"note", true}});
  }
};

template <class S>
std::vector<Complex<S>> off_support_points(const NikishinSystem<S>& sys, unsigned seed, int count,
                                           bool complex_too) {
  // deterministic rational sample points with distance >= 1/4 from every support
  std::mt19937 rng(seed);
  std::uniform_int_distribution<int> num(-400, 400);
  std::uniform_int_distribution<int> imn(-300, 300);
  std::vector<Complex<S>> pts;
  while (static_cast<int>(pts.size()) < count) {
    S re = S(num(rng)) / S(32);
    S im = complex_too ? S(imn(rng)) / S(32) : S(0);
    if (nhp::is_zero(im)) {
      bool ok = true;
      for (int j = 1; j <= sys.size(); ++j) {
        const auto& d = sys.delta(j);
        S quarter = S(1) / S(4);
        bool below = !d.lo_unbounded && re < d.lo - quarter;
        bool above = !d.hi_unbounded && re > d.hi + quarter;
        if (!(below || above)) { ok = false; break; }
      }
      if (!ok) continue;
    } else if (abs(im) < S(1) / S(4)) {
      continue;
    }
    pts.push_back(Complex<S>(re, im));
  }
  return pts;
}

template <class S>
int run_verify_t(const RunConfig& cfg, const std::string& outdir, std::ostream& log) {
  Realized<S> r = realize<S>(cfg);
  const auto& sys = r.system;
  const int m = sys.size();
  constexpr bool exact = ScalarTraits<S>::is_exact;
  const double tol = exact ? 0.0 : to_double(ScalarTraits<S>::zero_gauge());
  CheckLog out{log};

  const int N = cfg.verify_series_order;
  MomentTable<S> t1 = MomentTable<S>::from_measure(sys.generator(1), N + cfg.verify_max_n + 8);

  // reciprocal series: (l + tauhat) * shat == 1 through the available window
  {
    InverseMoments<S> inv = inverse_moments(t1, N);
    LaurentSeries<S> prod = inv.reciprocal_series() * t1.cauchy_series();
    bool ok = true;
    double worst = 0;
    for (int t = 0; t >= -N; --t) {
      S c = prod.coeff(t);
      if (t == 0) c -= S(1);
      worst = std::max(worst, std::fabs(to_double(c)));
      if (exact ? !nhp::is_zero(c) : std::fabs(to_double(c)) > tol) ok = false;
    }
    out.emit("reciprocal-series-identity", ok, "max residual " + fmt_double(worst));
  }

  // triangular solve vs Hessenberg determinant route
  {
    InverseMoments<S> inv = inverse_moments(t1, cfg.verify_max_n);
    bool ok = true;
    std::string detail;
    for (int nn = 0; nn <= cfg.verify_max_n; ++nn) {
      S om = hessenberg_omega(t1, nn);
      S c0p(1);
      for (int t = 0; t < nn + 3; ++t) c0p = c0p * t1.c[0];
      S dn = (nn % 2 == 0 ? om : -om) / c0p;
      S diff = dn - inv.d[nn];
      bool match = exact ? nhp::is_zero(diff) : std::fabs(to_double(diff)) <= tol;
      if (!match) {
        ok = false;
        detail = "mismatch at n = " + std::to_string(nn);
        break;
      }
    }
    out.emit("hessenberg-inverse-agreement", ok, detail.empty() ? "n <= " + std::to_string(cfg.verify_max_n) : detail);
  }

  // enumeration audit of the determinant expansion
  {
    bool ok = true;
    std::string detail;
    for (int nn = 0; nn <= 4; ++nn) {
      auto audit = hessenberg_omega_by_expansion(t1, nn);
      S om = hessenberg_omega(t1, nn);
      long expect = 1L << (nn + 1);
      bool value_ok = exact ? (audit.value == om)
                            : std::fabs(to_double(audit.value - om)) <= tol * (1 + std::fabs(to_double(om)));
      if (audit.term_count != expect || !audit.index_sums_ok || !value_ok) {
        ok = false;
        detail = "n = " + std::to_string(nn) + ": terms " + std::to_string(audit.term_count) +
                 " (expect " + std::to_string(expect) + ")";
        break;
      }
    }
    out.emit("hessenberg-expansion-audit", ok, detail.empty() ? "term counts 2^(n+1), n <= 4" : detail);
  }

  // |d_n| <= 2^(n+1) c_{n+2} / c_0^2 for measures on the positive half line
  {
    const auto& d1 = sys.delta(1);
    if (!d1.lo_unbounded && !(d1.lo < S(0))) {
      int top = std::min(12, t1.max_order() - 2);
      InverseMoments<S> inv = inverse_moments(t1, top);
      bool ok = true;
      std::string detail = "n <= " + std::to_string(top);
      for (int nn = 0; nn <= top; ++nn) {
        S bound = S(1L << (nn + 1)) * t1.c[nn + 2] / (t1.c[0] * t1.c[0]);
        if (abs(inv.d[nn]) > bound) {
          ok = false;
          detail = "violated at n = " + std::to_string(nn);
          break;
        }
      }
      out.emit("inverse-moment-bound", ok, detail);
    } else {
      out.note("inverse-moment-bound", "skipped: first support not in the positive half line");
    }
  }

  // Holder composition bound on random compositions
  {
    const auto& d1 = sys.delta(1);
    if (!d1.lo_unbounded && !(d1.lo < S(0)) && sys.generator(1).sign() > 0) {
      std::mt19937 rng(cfg.verify_seed);
      bool ok = true;
      std::string detail;
      for (int nn = 0; nn <= 10 && ok; ++nn) {
        S rhs = S(1);
        for (int t = 0; t < nn + 1; ++t) rhs = rhs * t1.c[0];
        rhs = rhs * t1.c[nn + 2];
        for (int trial = 0; trial < 20; ++trial) {
          // random composition alpha_1 + ... + alpha_j = n+2, alpha_k >= 1
          int rest = nn + 2;
          std::vector<int> alpha;
          while (rest > 0) {
            std::uniform_int_distribution<int> pick(1, rest);
            int a = pick(rng);
            alpha.push_back(a);
            rest -= a;
          }
          S lhs = S(1);
          int c0_power = nn + 2 - static_cast<int>(alpha.size());
          for (int t = 0; t < c0_power; ++t) lhs = lhs * t1.c[0];
          for (int a : alpha) lhs = lhs * t1.c[a];
          if (lhs > rhs) {
            ok = false;
            detail = "violated at n = " + std::to_string(nn);
            break;
          }
        }
      }
      out.emit("holder-composition-bound", ok, detail.empty() ? "n <= 10, 20 compositions each" : detail);
    } else {
      out.note("holder-composition-bound", "skipped: needs a positive first generator on the positive half line");
    }
  }

  // ratio identity through series order N (needs m >= 2)
  if (m >= 2) {
    bool ok = true;
    std::string detail;
    for (int k = 2; k <= m; ++k) {
      auto res = ratio_identity_residual(sys, k, N);
      bool this_ok = exact ? res.exact_zero : res.max_abs_residual <= tol;
      if (!this_ok) {
        ok = false;
        detail = "k = " + std::to_string(k) + ", residual " + fmt_double(res.max_abs_residual);
        break;
      }
    }
    out.emit("ratio-series-identity", ok, detail.empty() ? "orders 0.." + std::to_string(N) : detail);
  } else {
    out.note("ratio-series-identity", "skipped: single-generator system");
  }

  // transform product split identity at off-support points
  {
    auto pts = off_support_points(sys, cfg.verify_seed + 1, 6, true);
    bool ok = true;
    double worst = 0;
    for (int j = 0; j < m; ++j) {
      auto res = identity_check(sys, j, pts);
      worst = std::max(worst, res.max_abs_residual);
      if (exact ? !res.exact_zero : res.max_abs_residual > tol * 10) ok = false;
    }
    out.emit("product-split-identity", ok, "max residual " + fmt_double(worst));
  }

  // product sign constancy
  {
    bool ok = true;
    for (int j = 1; j <= m && ok; ++j)
      for (int k = 1; k <= m && ok; ++k) {
        const Measure<S>& s = sys.s(j, k);
        int sg = s.sign();
        for (const auto& a : s.atoms())
          if (sign_of(a.w) != sg) { ok = false; break; }
      }
    out.emit("product-sign-constancy", ok, "all nested products");
  }

  // Carleman partial sums monotone + decay report
  {
    auto rep = carleman_sum(t1, std::min(t1.max_order(), 16));
    bool mono = true;
    for (std::size_t i = 1; i < rep.partial_sums.size(); ++i)
      if (rep.partial_sums[i] < rep.partial_sums[i - 1]) mono = false;
    out.emit("carleman-partial-sums", mono,
             "sum " + fmt_double(rep.sum) + ", term decay slope " + fmt_double(rep.decay_slope) +
                 (rep.divergent_heuristic ? " (divergence-consistent)" : " (decay too fast)"));
  }

  // per-index structural checks
  json kappa_records = json::array();
  for (const auto& n : r.indices) {
    const std::string tag = n.str();
    std::optional<HPSolution<S>> red_opt, full_opt;
    try {
      red_opt = solve_type1(sys, n, r.scheme, SolvePath::ReducedOrthogonality);
      full_opt = solve_type1(sys, n, r.scheme, SolvePath::FullInterpolation);
    } catch (const Error& e) {
      out.emit("solution-structure " + tag, false, e.what());
      continue;
    }
    const HPSolution<S>& red = *red_opt;
    const HPSolution<S>& full = *full_opt;
    bool deg_ok = true;
    for (int j = 0; j <= m; ++j)
      if (red.a[j].degree() != n.cap(j) - 1) deg_ok = false;
    bool paths_equal = true;
    for (int j = 0; j <= m; ++j) {
      if (exact) {
        if (!(red.a[j] == full.a[j])) paths_equal = false;
      } else {
        for (int k = 0; k <= std::max(red.a[j].degree(), full.a[j].degree()); ++k)
          if (!negligible(red.a[j].coeff(k) - full.a[j].coeff(k), S(1))) paths_equal = false;
      }
    }
    out.emit("solution-structure " + tag,
             deg_ok && paths_equal && red.nullspace_dim == 1 && red.residual.order_conditions_verified,
             std::string("degrees ") + (deg_ok ? "ok" : "DEFICIT") + ", paths " +
                 (paths_equal ? "proportional" : "DIVERGE") + ", remainder zero through " +
                 std::to_string(red.residual.remainder_zero_through));

    const auto& d1 = sys.delta(1);
    auto sc = count_sign_changes<S>([&](const S& x) { return linear_form(red, sys, 1, x); }, d1.lo,
                                    d1.hi, std::max(64, 8 * static_cast<int>(n.total())));
    out.emit("a1-zero-count " + tag, sc.count == static_cast<int>(n.total()) - 1,
             std::to_string(sc.count) + " sign changes, expected " + std::to_string(n.total() - 1));

    if (m >= 2 && sys.delta(m).bounded() && sys.delta(m - 1).bounded()) {
      auto [cc, rr2] = default_contour(sys);
      KappaAudit ka = kappa_audit(sys, red, cc, rr2);
      kappa_records.push_back(kappa_to_json(n.entries(), ka));
      if (ka.skipped)
        out.note("kappa-audit " + tag, "skipped (open question): jbar = m");
      else
        out.emit("kappa-audit " + tag, ka.match, ka.match ? "counts match" : "counts differ");
    }
  }

  ensure_dir(outdir);
  std::ofstream(outdir + "/verify.json")
      << json{{"checks", out.items}, {"kappa_audits", kappa_records}}.dump(2) << "\n";
  log << (out.all_ok ? "VERIFY OK" : "VERIFY FAILED") << "\n";
  return out.all_ok ? kExitOk : kExitVerifyFailed;
}

}  // namespace

int run_solve(const RunConfig& cfg, const std::string& outdir, std::ostream& log) {
  if (cfg.exact) return run_solve_t<Rational>(cfg, outdir, log);
  BigFloat::set_context_precision(cfg.bits);
  return run_solve_t<BigFloat>(cfg, outdir, log);
}

int run_sweep(const RunConfig& cfg, const std::string& outdir, std::ostream& log) {
  if (cfg.exact) return run_sweep_t<Rational>(cfg, outdir, log);
  BigFloat::set_context_precision(cfg.bits);
  return run_sweep_t<BigFloat>(cfg, outdir, log);
}

int run_verify(const RunConfig& cfg, const std::string& outdir, std::ostream& log) {
  if (cfg.exact) return run_verify_t<Rational>(cfg, outdir, log);
  BigFloat::set_context_precision(cfg.bits);
  return run_verify_t<BigFloat>(cfg, outdir, log);
}

}  // namespace nhp
