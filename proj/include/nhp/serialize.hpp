#ifndef NHP_SERIALIZE_HPP
#define NHP_SERIALIZE_HPP

#include <cstdio>
#include <ostream>
#include <string>

#include "json.hpp"
#include "nhp/diagnostics.hpp"

namespace nhp {

using json = nlohmann::json;

inline std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

template <class S>
json interval_to_json(const Interval<S>& I) {
  json j;
  j["lo"] = I.lo_unbounded ? json("-inf") : json(scalar_str(I.lo));
  j["hi"] = I.hi_unbounded ? json("inf") : json(scalar_str(I.hi));
  return j;
}

template <class S>
json measure_to_json(const Measure<S>& s) {
  json atoms = json::array();
  for (const auto& a : s.atoms()) atoms.push_back({scalar_str(a.x), scalar_str(a.w)});
  return json{{"name", s.name()},
              {"atoms", atoms},
              {"support", interval_to_json(s.support())},
              {"sign", s.sign()},
              {"provenance", provenance_str(s.provenance())}};
}

template <class S>
json system_to_json(const NikishinSystem<S>& sys) {
  json gens = json::array(), products = json::array();
  for (int j = 1; j <= sys.size(); ++j) gens.push_back(measure_to_json(sys.generator(j)));
  for (int j = 1; j <= sys.size(); ++j)
    for (int k = 1; k <= sys.size(); ++k)
      if (j != k) products.push_back(measure_to_json(sys.s(j, k)));
  return json{{"m", sys.size()}, {"generators", gens}, {"products", products}};
}

template <class S>
json scheme_to_json(const InterpolationScheme<S>& scheme) {
  json real = json::array(), pairs = json::array();
  for (const auto& r : scheme.real_roots()) real.push_back({scalar_str(r.value), r.multiplicity});
  for (const auto& p : scheme.pair_roots())
    pairs.push_back({scalar_str(p.re), scalar_str(p.im), p.multiplicity});
  return json{{"real", real}, {"pairs", pairs}, {"degree", scheme.degree()}};
}

template <class S>
json polynomial_to_json(const Polynomial<S>& p) {
  json arr = json::array();  // ascending
  for (int k = 0; k <= p.degree(); ++k) arr.push_back(scalar_str(p.coeff(k)));
  return arr;
}

template <class S>
json solution_to_json(const HPSolution<S>& sol, const InterpolationScheme<S>& scheme) {
  json a = json::array();
  for (const auto& p : sol.a) a.push_back(polynomial_to_json(p));
  json res{{"exact_mode", sol.residual.exact_mode},
           {"order_conditions_verified", sol.residual.order_conditions_verified},
           {"remainder_zero_through", sol.residual.remainder_zero_through},
           {"max_linear_residual", sol.residual.max_linear_residual},
           {"weight_sign_mixed", sol.residual.weight_sign_mixed},
           {"degrees", sol.residual.degrees}};
  return json{{"multi_index", sol.index.entries()},
              {"n0", sol.index.n0()},
              {"w_roots", scheme_to_json(scheme)},
              {"precision", ScalarTraits<S>::is_exact ? "exact"
                                                      : "float:" + std::to_string(BigFloat::context_precision())},
              {"normalization", sol.normalization == Normalization::MonicLast ? "monic-last" : "unit-max-coeff"},
              {"nullspace_dim", sol.nullspace_dim},
              {"path", sol.path == SolvePath::ReducedOrthogonality ? "reduced" : "full"},
              {"a", a},
              {"residual", res}};
}

template <class S>
void moment_table_csv(std::ostream& os, const MomentTable<S>& t) {
  os << "nu,c_nu\n";
  for (int nu = 0; nu <= t.max_order(); ++nu) os << nu << "," << scalar_str(t.c[nu]) << "\n";
}

template <class S>
void report_csv(std::ostream& os, const ConvergenceReport<S>& rep) {
  os << "abs_n,j,e,f\n";
  for (const auto& r : rep.rows)
    os << r.abs_n << "," << r.j << "," << fmt_double(r.e) << "," << fmt_double(r.f) << "\n";
}

template <class S>
json report_to_json(const ConvergenceReport<S>& rep, const SweepSpec<S>& spec) {
  json rows = json::array();
  for (const auto& r : rep.rows)
    rows.push_back({{"abs_n", r.abs_n}, {"j", r.j}, {"e", r.e}, {"f", r.f}});
  json fits = json::array();
  for (const auto& f : rep.fits)
    fits.push_back({{"j", f.j},
                    {"delta_hat", f.delta_hat},
                    {"r2", f.r2},
                    {"monotone_from_abs_n", f.monotone_from}});
  json grid = json::array();
  for (const auto& z : spec.grid) grid.push_back({scalar_str(z.re), scalar_str(z.im)});
  return json{{"rows", rows},
              {"fits", fits},
              {"grid", grid},
              {"attempted", rep.attempted},
              {"solved", rep.solved},
              {"max_spread", rep.max_spread},
              {"last_supports_touch", rep.last_supports_touch},
              {"trailing_carleman_divergent", rep.trailing_carleman_divergent},
              {"index_errors", rep.index_errors}};
}

inline json kappa_to_json(const std::vector<int>& index_entries, const KappaAudit& a) {
  json j{{"multi_index", index_entries},
         {"jbar", a.jbar},
         {"contour", {{"center", a.center}, {"radius", a.radius}}}};
  if (a.skipped) {
    j["status"] = "skipped (open question)";
  } else {
    j["status"] = a.match ? "match" : "mismatch";
    j["kappa_observed"] = a.observed;
    j["kappa_predicted"] = a.predicted;
  }
  return j;
}

}  // namespace nhp

#endif  // NHP_SERIALIZE_HPP
