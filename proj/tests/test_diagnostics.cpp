#include "doctest.h"

#include "nhp/diagnostics.hpp"
#include "nhp/quadrature.hpp"

using namespace nhp;
using R = Rational;
using B = BigFloat;
using P = Polynomial<R>;

namespace {

NikishinSystem<R> benchmark_m2(int atoms = 40) {
  auto s1 = discretize_uniform<R>(Interval<R>(R(0), R(1)), atoms, UniformRule::Midpoint, "sigma1");
  auto s2 = discretize_uniform<R>(Interval<R>(R(2), R(3)), atoms, UniformRule::Midpoint, "sigma2");
  return build_system<R>({s1, s2});
}

}  // namespace

TEST_CASE("sign changes: polynomial cases") {
  auto f = [](const R& x) { return x - R(1, 2); };
  auto res = count_sign_changes<R>(f, R(0), R(1), 16);
  CHECK(res.count == 1);
  REQUIRE(res.brackets.size() == 1);
  CHECK(res.brackets[0].first <= R(1, 2));
  CHECK(R(1, 2) <= res.brackets[0].second);

  auto c = count_sign_changes<R>([](const R&) { return R(3); }, R(0), R(1), 8);
  CHECK(c.count == 0);
}

TEST_CASE("sign changes of the first linear form match the zero count") {
  auto sys = benchmark_m2();
  MultiIndex n({2, 2});
  auto sol = solve_type1(sys, n);
  auto res = count_sign_changes<R>([&](const R& x) { return linear_form(sol, sys, 1, x); }, R(0),
                                   R(1), 64);
  CHECK(res.count == 3);  // |n| - 1
  CHECK_FALSE(res.grid_too_coarse);
}

TEST_CASE("reduction chain: sign-change lower bounds down the ladder") {
  auto sys = benchmark_m2();
  MultiIndex n({3, 3});
  auto sol = solve_type1(sys, n);
  // step 1 on the first support: exactly |n| - 1
  auto s1 = count_sign_changes<R>([&](const R& x) { return linear_form(sol, sys, 1, x); }, R(0),
                                  R(1), 96);
  CHECK(s1.count == 5);
  // step 2 on the second support: at least |n| - max(n_1..) - 1
  auto s2 = count_sign_changes<R>([&](const R& x) { return linear_form(sol, sys, 2, x); }, R(2),
                                  R(3), 96);
  CHECK(s2.count >= 2);
  CHECK(sol.a[2].degree() == 2);
}

TEST_CASE("exterior zero counts by winding") {
  P p = poly_from_real_roots<R>({{R(10), 1}, {R(1, 4), 1}});
  CHECK(exterior_zero_count(p, 0.5, 1.0) == 1);

  P inside = poly_from_real_roots<R>({{R(1, 4), 1}, {R(1, 2), 2}, {R(3), 1}});
  CHECK(exterior_zero_count(inside, 0.5, 5.0) == 0);

  // complex pair outside, one real root inside
  P mixed = poly_from_conjugate_pair(R(5), R(2)) * poly_from_real_roots<R>({{R(0), 1}});
  CHECK(exterior_zero_count(mixed, 0.0, 2.0) == 2);

  CHECK_THROWS_AS(exterior_zero_count(P::zero(), 0.0, 1.0), std::invalid_argument);
}

TEST_CASE("exterior count audit on unbalanced shapes") {
  auto sys = benchmark_m2();
  auto [center, radius] = default_contour(sys);
  CHECK(center == doctest::Approx(2.5));
  CHECK(radius == doctest::Approx(1.25));
  for (int k = 2; k <= 4; ++k) {
    auto sol = solve_type1(sys, MultiIndex({k, k + 2}));
    auto audit = kappa_audit(sys, sol, center, radius);
    CHECK_FALSE(audit.skipped);
    CHECK(audit.jbar == 1);
    REQUIRE(audit.predicted.size() == 3);
    CHECK(audit.predicted == std::vector<int>{1, 0, 1});
    CHECK(audit.match);
  }
  // a trailing minimum lands jbar on the last block: prediction is gated off
  auto sol_gate = solve_type1(sys, MultiIndex({3, 2}));
  auto gated = kappa_audit(sys, sol_gate, center, radius);
  CHECK(gated.skipped);
  CHECK(gated.jbar == 2);
}

TEST_CASE("convergence sweep on the benchmark") {
  auto sys = benchmark_m2();
  SweepSpec<R> spec;
  for (int k = 2; k <= 5; ++k) spec.indices.push_back(MultiIndex({k, k}));
  spec.grid = {Complex<R>(R(-2)), Complex<R>(R(4)), Complex<R>(R(5, 2), R(2)),
               Complex<R>(R(-1), R(-1))};
  auto rep = convergence_sweep(sys, spec);
  CHECK(rep.solved == 4);
  CHECK(rep.index_errors.empty());
  REQUIRE(rep.rows.size() == 8);

  // e decreasing in |n| for both targets; delta below 1
  for (int j = 0; j <= 1; ++j) {
    double prev = 1e300;
    for (const auto& row : rep.rows)
      if (row.j == j) {
        CHECK(row.e < prev);
        prev = row.e;
      }
    CHECK(rep.fits[j].delta_hat < 1.0);
    CHECK(rep.fits[j].monotone_from == 4);
  }

  // the linear-form bound from the residual split: f_j <= sum_k e_k sup|shat_{j+1,k}|
  // j = m-1 = 1: f_1 == e_1 exactly (single term, unit factor)
  for (const auto& row : rep.rows)
    if (row.j == 1) {
      double e1 = row.e;
      CHECK(row.f == doctest::Approx(e1).epsilon(1e-12));
    }
}

TEST_CASE("zero accumulation toward the last support") {
  auto sys = benchmark_m2();
  // all but O(1) zeros of every block land in a fattening of the last support
  for (int n = 3; n <= 6; ++n) {
    auto sol = solve_type1(sys, MultiIndex({n, n}));
    long floor_count = sol.index.total() / 2 - 2;  // |n|/m - C_1 with C_1 = 2
    for (int j = 0; j <= 2; ++j) {
      if (sol.a[j].is_zero()) continue;
      int inside = sol.a[j].degree() - exterior_zero_count(sol.a[j], 2.5, 0.75);
      CHECK(inside >= floor_count);
    }
  }
}

TEST_CASE("linear-form bound from the residual split") {
  auto sys = benchmark_m2();
  SweepSpec<R> spec;
  for (int k = 2; k <= 5; ++k) spec.indices.push_back(MultiIndex({k, k}));
  spec.grid = {Complex<R>(R(-2)), Complex<R>(R(4)), Complex<R>(R(5, 2), R(2)),
               Complex<R>(R(-1), R(-1))};
  auto rep = convergence_sweep(sys, spec);
  double B01 = 0;  // sup over the grid of |shat_{1,1}|
  for (const auto& z : spec.grid)
    B01 = std::max(B01, abs_to_double(cauchy_transform(sys.s(1, 1), z)));
  REQUIRE(rep.rows.size() % 2 == 0);
  for (std::size_t i = 0; i < rep.rows.size(); i += 2) {
    REQUIRE(rep.rows[i].j == 0);
    REQUIRE(rep.rows[i + 1].j == 1);
    double e0 = rep.rows[i].e, e1 = rep.rows[i + 1].e;
    CHECK(rep.rows[i].f <= e0 + e1 * B01 + 1e-15);
    CHECK(rep.rows[i + 1].f <= e1 * (1 + 1e-12));
  }
}

TEST_CASE("sweep spec validation") {
  auto sys = benchmark_m2();
  SweepSpec<R> spec;
  CHECK_THROWS_AS(convergence_sweep(sys, spec), ConfigError);  // empty indices
  spec.indices.push_back(MultiIndex({2, 2}));
  CHECK_THROWS_AS(convergence_sweep(sys, spec), ConfigError);  // empty grid
  spec.grid = {Complex<R>(R(5, 2))};                            // inside the last support
  CHECK_THROWS_AS(convergence_sweep(sys, spec), ConfigError);
  spec.grid = {Complex<R>(R(4))};
  spec.indices.push_back(MultiIndex({2, 2}));  // |n| not increasing
  CHECK_THROWS_AS(convergence_sweep(sys, spec), ConfigError);
}

TEST_CASE("sweep tolerates per-index failures") {
  auto sys = benchmark_m2(6);  // only 6 atoms: large indices break the budget
  SweepSpec<R> spec;
  spec.indices = {MultiIndex({2, 2}), MultiIndex({3, 3}), MultiIndex({4, 4})};
  spec.grid = {Complex<R>(R(4))};
  auto rep = convergence_sweep(sys, spec);
  CHECK(rep.attempted == 3);
  CHECK(rep.solved == 2);  // (4,4) needs 8 atoms
  REQUIRE(rep.index_errors.size() == 1);
  CHECK(rep.index_errors[0].find("(4,4)") != std::string::npos);
}

TEST_CASE("product-split identity") {
  // m = 1: the two surviving terms cancel identically
  auto sys1 = build_system<R>(
      {discretize_uniform<R>(Interval<R>(R(0), R(1)), 8, UniformRule::Midpoint, "s")});
  auto res1 = identity_check(sys1, 0, {Complex<R>(R(5)), Complex<R>(R(0), R(2))});
  CHECK(res1.exact_zero);

  // m = 2 on exact atoms: identically zero as well
  auto sys = benchmark_m2(8);
  auto res = identity_check(sys, 0, {Complex<R>(R(10)), Complex<R>(R(-1), R(1))});
  CHECK(res.exact_zero);

  // far-field decay of each term keeps the residual tiny in float mode
  BigFloat::set_context_precision(128);
  for (int N : {8, 16, 32}) {
    auto f1 = discretize_uniform<B>(Interval<B>(B(0), B(1)), N, UniformRule::Gauss, "f1");
    auto f2 = discretize_uniform<B>(Interval<B>(B(2), B(3)), N, UniformRule::Gauss, "f2");
    auto fs = build_system<B>({f1, f2});
    auto r = identity_check(fs, 0, {Complex<B>(B(10))});
    CHECK(r.max_abs_residual < 1e-30);  // roundoff scale at 128 bits
  }
  BigFloat::set_context_precision(192);
}

TEST_CASE("ratio identity through series order ten") {
  auto sys = benchmark_m2(12);
  auto res = ratio_identity_residual(sys, 2, 10);
  CHECK(res.exact_zero);
  CHECK(res.order_checked == 10);

  // three-level system, both nontrivial ratios
  auto g1 = discretize_uniform<R>(Interval<R>(R(0), R(1)), 10, UniformRule::Midpoint, "g1");
  auto g2 = discretize_uniform<R>(Interval<R>(R(2), R(3)), 10, UniformRule::Midpoint, "g2");
  auto g3 = discretize_uniform<R>(Interval<R>(R(4), R(5)), 10, UniformRule::Midpoint, "g3");
  auto sys3 = build_system<R>({g1, g2, g3});
  CHECK(ratio_identity_residual(sys3, 2, 8).exact_zero);
  CHECK(ratio_identity_residual(sys3, 3, 8).exact_zero);
}

TEST_CASE("contact order") {
  auto sys1 = build_system<R>(
      {discretize_uniform<R>(Interval<R>(R(0), R(1)), 24, UniformRule::Midpoint, "s")});
  const Measure<R>& sigma = sys1.s(1, 1);

  // diagonal rational pair built from moment orthogonality (independent of
  // the solver): q of degree nn orthogonal to x^0..x^{nn-1}
  for (int nn = 2; nn <= 4; ++nn) {
    VecX<R> c = moments(sigma, 2 * nn + 4);
    MatX<R> H(nn, nn);
    VecX<R> rhs(nn);
    for (int i = 0; i < nn; ++i) {
      rhs[i] = -c[i + nn];
      for (int j = 0; j < nn; ++j) H(i, j) = c[i + j];
    }
    VecX<R> qc = H.fullPivLu().solve(rhs);
    VecX<R> qfull(nn + 1);
    for (int j = 0; j < nn; ++j) qfull[j] = qc[j];
    qfull[nn] = R(1);
    P q(qfull);
    // numerator polynomial = polynomial part of q * shat
    LaurentSeries<R> prod = LaurentSeries<R>::from_polynomial(q, -2) *
                            LaurentSeries<R>::from_moment_coeffs(c);
    VecX<R> pc(std::max(prod.hi(), 0) + 1);
    for (int t = 0; t <= prod.hi(); ++t) pc[t] = prod.coeff(t);
    P p(pc);
    auto co = contact_order(q, p, sigma, P::constant(R(1)), 3 * nn);
    CHECK(co.order == nn + 1);
    CHECK_FALSE(co.lower_bound_only);
  }

  // q = 1, p = 0: order is one past the first nonzero moment
  auto co0 = contact_order(P::constant(R(1)), P::zero(), sigma, P::constant(R(1)), 6);
  CHECK(co0.order == 1);

  // solved-pair chain: (a_{m-1}, a_m) against the last generator, relative to
  // the isolated zeros of the first form
  auto sys = benchmark_m2();
  MultiIndex n({3, 3});
  auto sol = solve_type1(sys, n);
  auto zeros = count_sign_changes<R>([&](const R& x) { return linear_form(sol, sys, 1, x); },
                                     R(0), R(1), 96, 200);
  REQUIRE(zeros.count == 5);
  std::vector<std::pair<R, int>> wr;
  for (auto& [a, b] : zeros.brackets) wr.push_back({(a + b) / R(2), 1});
  P w_n1 = poly_from_real_roots<R>(wr);
  auto chain = contact_order(sol.a[2], -sol.a[1], sys.generator(2), w_n1, 8, 1e-9);
  CHECK(chain.order >= 3);  // |n| - max(n_j)
}

TEST_CASE("contour edge cases") {
  // root exactly on the contour: the radius perturbation path still resolves
  P onring = poly_from_real_roots<R>({{R(3, 2), 1}, {R(10), 1}});
  int count = exterior_zero_count(onring, 0.5, 1.0);
  CHECK(count >= 1);  // 10 always outside; 3/2 lands wherever the perturbed ring puts it

  // roots planted on the contour and on every perturbed radius exhaust the retries
  std::vector<std::pair<R, int>> blocked;
  for (int k = 0; k <= 3; ++k) blocked.push_back({R(1, 2) + R(64 + k, 64), 1});
  P wall = poly_from_real_roots<R>(blocked);
  CHECK_THROWS_AS(exterior_zero_count(wall, 0.5, 1.0), Error);
}

TEST_CASE("touching trailing supports flip the sweep onto the moment heuristic") {
  auto s1 = discretize_uniform<R>(Interval<R>(R(0), R(1)), 12, UniformRule::Midpoint, "s1");
  auto s2 = discretize_uniform<R>(Interval<R>(R(1), R(2)), 12, UniformRule::Midpoint, "s2");
  auto sys = build_system<R>({s1, s2});
  SweepSpec<R> spec;
  for (int k = 2; k <= 4; ++k) spec.indices.push_back(MultiIndex({k, k}));
  spec.grid = {Complex<R>(R(4)), Complex<R>(R(-1), R(1))};
  auto rep = convergence_sweep(sys, spec);
  CHECK(rep.last_supports_touch);
  CHECK(rep.trailing_carleman_divergent);  // bounded support: partial sums keep growing
  CHECK(rep.solved == 3);

  auto far = benchmark_m2();
  SweepSpec<R> spec2;
  spec2.indices = {MultiIndex({2, 2}), MultiIndex({2, 4})};
  spec2.grid = {Complex<R>(R(4))};
  auto rep2 = convergence_sweep(far, spec2);
  CHECK_FALSE(rep2.last_supports_touch);
  CHECK(rep2.max_spread == 2);
}
