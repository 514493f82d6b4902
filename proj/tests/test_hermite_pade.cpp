#include "doctest.h"

#include <random>

#include "nhp/hermite_pade.hpp"
#include "nhp/quadrature.hpp"

using namespace nhp;
using R = Rational;
using P = Polynomial<R>;

namespace {

NikishinSystem<R> benchmark_m2(int atoms = 40) {
  auto s1 = discretize_uniform<R>(Interval<R>(R(0), R(1)), atoms, UniformRule::Midpoint, "sigma1");
  auto s2 = discretize_uniform<R>(Interval<R>(R(2), R(3)), atoms, UniformRule::Midpoint, "sigma2");
  return build_system<R>({s1, s2});
}

NikishinSystem<R> tiny_m2() {
  Measure<R> s1({{R(0), R(1, 2)}, {R(1), R(1, 2)}}, Interval<R>(R(0), R(1)), Provenance::Generator,
                "sigma1");
  Measure<R> s2({{R(2), R(1, 2)}, {R(3), R(1, 2)}}, Interval<R>(R(2), R(3)), Provenance::Generator,
                "sigma2");
  return build_system<R>({s1, s2});
}

NikishinSystem<R> markov_m1(int atoms = 40) {
  return build_system<R>(
      {discretize_uniform<R>(Interval<R>(R(0), R(1)), atoms, UniformRule::Midpoint, "sigma1")});
}

}  // namespace

TEST_CASE("multi-index bookkeeping") {
  MultiIndex n({2, 4});
  CHECK(n.total() == 6);
  CHECK(n.n0() == 3);
  CHECK(n.spread() == 2);
  CHECK(n.cap(0) == 3);
  CHECK(n.cap(2) == 4);
  CHECK(n.jbar() == 1);  // components (3, 2, 4), minimum at position 1

  CHECK(MultiIndex({1, 1}).jbar() == 0);  // components (0, 1, 1): min is n_0
  CHECK(MultiIndex({3, 2}).jbar() == 2);  // components (2, 3, 2): last minimum on the final block
  CHECK(MultiIndex({3, 3}).jbar() == 0);  // components (2, 3, 3)
  CHECK_THROWS_AS(MultiIndex({0, 0}), ConfigError);
  CHECK_THROWS_AS(MultiIndex({-1, 2}), ConfigError);
}

TEST_CASE("interpolation scheme validation") {
  InterpolationScheme<R> sch;
  CHECK(sch.trivial());
  CHECK(sch.degree() == 0);
  sch.add_real_root(R(-1), 2);
  sch.add_conjugate_pair(R(3, 2), R(1));
  CHECK(sch.degree() == 4);
  // (x+1)^2 ((x-3/2)^2 + 1)
  P expect = poly_from_real_roots<R>({{R(-1), 2}}) * poly_from_conjugate_pair(R(3, 2), R(1));
  CHECK(sch.weight() == expect);

  MultiIndex n({3, 3});
  CHECK(sch.asymptotic_conditions(n) == 6 + 3 - 2 - 4);
  CHECK_NOTHROW(sch.validate(n, Interval<R>(R(0), R(1))));

  InterpolationScheme<R> bad;
  bad.add_real_root(R(1, 2));
  CHECK_THROWS_AS(bad.validate(n, Interval<R>(R(0), R(1))), ConfigError);

  InterpolationScheme<R> toobig;
  toobig.add_real_root(R(-1), 10);
  CHECK_THROWS_AS(toobig.validate(MultiIndex({2, 2}), Interval<R>(R(0), R(1))), ConfigError);

  CHECK_THROWS_AS(sch.add_conjugate_pair(R(1), R(0)), ConfigError);
}

TEST_CASE("orthogonality assembly: frozen small systems") {
  // single measure, n = (2): one row of plain moments
  auto sys1 = markov_m1();
  MatX<R> M = assemble_orthogonality(sys1, MultiIndex({2}), {});
  REQUIRE(M.rows() == 1);
  REQUIRE(M.cols() == 2);
  CHECK(M(0, 0) == R(1));
  CHECK(M(0, 1) == R(1, 2));

  // n = (1): no conditions at all
  MatX<R> M1 = assemble_orthogonality(sys1, MultiIndex({1}), {});
  CHECK(M1.rows() == 0);
  CHECK(M1.cols() == 1);

  // two measures, n = (1,1): masses of s_{1,1} and s_{1,2}
  auto sys2 = tiny_m2();
  MatX<R> M2 = assemble_orthogonality(sys2, MultiIndex({1, 1}), {});
  REQUIRE(M2.rows() == 1);
  REQUIRE(M2.cols() == 2);
  CHECK(M2(0, 0) == R(1));
  CHECK(M2(0, 1) == sys2.s(1, 2).total_mass());
}

TEST_CASE("solve: classical first cases") {
  auto sys1 = markov_m1();

  auto sol2 = solve_type1(sys1, MultiIndex({2}));
  CHECK(sol2.a[1] == P{R(-1, 2), R(1)});
  CHECK(sol2.a[0] == P{R(-1)});
  CHECK(sol2.nullspace_dim == 1);
  CHECK(sol2.residual.order_conditions_verified);

  // the solved block's zero sits exactly at the balance point
  auto roots = real_roots_in_interval(sol2.a[1], R(0), R(1), R(1, 1 << 20));
  REQUIRE(roots.size() == 1);
  CHECK(roots[0].value == R(1, 2));

  auto sol1 = solve_type1(sys1, MultiIndex({1}));
  CHECK(sol1.a[1] == P{R(1)});
  CHECK(sol1.a[0].is_zero());
  CHECK(sol1.a[0].degree() == -1);
}

TEST_CASE("solve: two-measure mass ratio at the smallest index") {
  auto sys = tiny_m2();
  auto sol = solve_type1(sys, MultiIndex({1, 1}));
  // nullspace of [mass(s11)  mass(s12)], last block monic
  CHECK(sol.a[2] == P{R(1)});
  CHECK(sol.a[1] == P{-sys.s(1, 2).total_mass() / sys.s(1, 1).total_mass()});
  CHECK(sol.a[0].is_zero());

  // mass(s12) = -7/12 for this system, so a_1 = 7/12
  CHECK(sol.a[1] == P{R(7, 12)});
}

TEST_CASE("reconstruction of the leading block") {
  auto sys1 = markov_m1();
  auto sol = solve_type1(sys1, MultiIndex({2}));
  // w == 1 cross-check: a_0 equals minus the polynomial part of a_1 shat
  // polynomial part of (z - 1/2) * (c0/z + ...) is c0 = 1
  CHECK(sol.a[0] == P{R(-1)});
  // n = (1): zero polynomial
  CHECK(solve_type1(sys1, MultiIndex({1})).a[0].is_zero());
}

TEST_CASE("solver paths agree exactly after normalization") {
  auto sys = benchmark_m2();
  for (auto idx : {std::vector<int>{2, 2}, {3, 3}, {2, 4}, {4, 2}, {1, 3}}) {
    MultiIndex n(idx);
    auto red = solve_type1(sys, n, {}, SolvePath::ReducedOrthogonality);
    auto full = solve_type1(sys, n, {}, SolvePath::FullInterpolation);
    for (int j = 0; j <= 2; ++j) CHECK(red.a[j] == full.a[j]);
    CHECK(red.residual.order_conditions_verified);
    for (int j = 0; j <= 2; ++j) CHECK(red.a[j].degree() == n.cap(j) - 1);
  }
}

TEST_CASE("degenerate blocks are dropped") {
  auto sys = benchmark_m2();
  MultiIndex n({0, 2});  // first block forced to zero
  auto sol = solve_type1(sys, n);
  CHECK(sol.a[1].is_zero());
  CHECK(sol.a[2].degree() == 1);
  CHECK(sol.a[0].degree() == n.n0() - 1);
  CHECK(sol.residual.order_conditions_verified);
  auto full = solve_type1(sys, n, {}, SolvePath::FullInterpolation);
  for (int j = 0; j <= 2; ++j) CHECK(sol.a[j] == full.a[j]);

  // a vanishing trailing block falls back to unit-max-coefficient scaling
  MultiIndex n2({2, 0});
  auto sol2 = solve_type1(sys, n2);
  CHECK(sol2.a[2].is_zero());
  CHECK(sol2.a[1].degree() == 1);
  CHECK(sol2.normalization == Normalization::UnitMaxCoeff);
  CHECK(sol2.residual.order_conditions_verified);
  R biggest(0);
  for (int j = 0; j <= 2; ++j)
    for (int k = 0; k <= sol2.a[j].degree(); ++k)
      if (abs(sol2.a[j].coeff(k)) > biggest) biggest = abs(sol2.a[j].coeff(k));
  CHECK(biggest == R(1));
}

TEST_CASE("atom budget is enforced with the required count") {
  auto sys = tiny_m2();
  CHECK_NOTHROW(solve_type1(sys, MultiIndex({1, 1})));
  CHECK_THROWS_AS(solve_type1(sys, MultiIndex({2, 2})), AtomBudgetError);
  try {
    solve_type1(sys, MultiIndex({2, 2}));
  } catch (const AtomBudgetError& e) {
    CHECK(std::string(e.what()).find("needs >= 4") != std::string::npos);
  }
}

TEST_CASE("multipoint solves: real, repeated, and paired roots") {
  auto sys1 = markov_m1();
  InterpolationScheme<R> sch;
  sch.add_real_root(R(-1));
  MultiIndex n({2});
  auto sol = solve_type1(sys1, n, sch);
  auto full = solve_type1(sys1, n, sch, SolvePath::FullInterpolation);
  CHECK(sol.a[0] == full.a[0]);
  CHECK(sol.a[1] == full.a[1]);
  // the orthogonality relation the solution must satisfy: sum w_i a1(x_i)/(x_i+1) = 0
  R acc(0);
  for (const auto& at : sys1.generator(1).atoms()) acc += at.w * sol.a[1].eval(at.x) / (at.x + R(1));
  CHECK(acc == R(0));
  CHECK(sol.residual.order_conditions_verified);
  CHECK_FALSE(sol.residual.weight_sign_mixed);

  auto sys2 = benchmark_m2();
  InterpolationScheme<R> sch2;
  sch2.add_conjugate_pair(R(3, 2), R(1));
  sch2.add_real_root(R(-2), 2);
  MultiIndex n2({3, 2});
  auto red = solve_type1(sys2, n2, sch2);
  auto f2 = solve_type1(sys2, n2, sch2, SolvePath::FullInterpolation);
  for (int j = 0; j <= 2; ++j) CHECK(red.a[j] == f2.a[j]);
  CHECK(red.residual.order_conditions_verified);
}

TEST_CASE("remainder series: leading coefficients") {
  auto sys1 = markov_m1();
  auto sol = solve_type1(sys1, MultiIndex({2}));
  VecX<R> r = remainder_series(sol, sys1, {}, 3);
  CHECK(r[0] == R(0));  // z^-1
  // z^-2 coefficient is c_2 - c_1^2 for the monic-normalized solve
  R c1 = moment(sys1.generator(1), 1), c2 = moment(sys1.generator(1), 2);
  CHECK(r[1] == c2 - c1 * c1);

  // n = (1): everything vacuous, z^-1 coefficient is the mass
  auto sol1 = solve_type1(sys1, MultiIndex({1}));
  VecX<R> r1 = remainder_series(sol1, sys1, {}, 2);
  CHECK(r1[0] == R(1));
}

TEST_CASE("remainder series zeros through the prescribed order") {
  auto sys = benchmark_m2();
  for (int k = 1; k <= 5; ++k) {
    MultiIndex n({k, k});
    auto sol = solve_type1(sys, n);
    VecX<R> r = remainder_series(sol, sys, {}, static_cast<int>(n.total()));
    for (int t = 0; t + 1 < n.total(); ++t) CHECK(r[t] == R(0));
    CHECK_FALSE(r[n.total() - 1] == R(0));
  }
}

TEST_CASE("integral representation equals the direct form") {
  auto sys = benchmark_m2();
  InterpolationScheme<R> sch;
  sch.add_real_root(R(-3));
  MultiIndex n({2, 2});
  auto sol = solve_type1(sys, n, sch);
  const P& w = sch.weight();

  for (R z : {R(5), R(-7, 2), R(3, 2)}) {
    R lhs = linear_form(sol, sys, 0, z) / w.eval(z);
    CHECK(lhs == remainder_integral(sol, sys, sch, z));
  }
  Complex<R> zc(R(1, 2), R(2));
  Complex<R> lhs = linear_form(sol, sys, 0, zc) / w.eval(zc);
  CHECK(lhs == remainder_integral(sol, sys, sch, zc));

  // far-field decay: z^{|n|} * remainder stays bounded
  double prev = 0;
  for (long zv : {10L, 100L, 1000L}) {
    R val = remainder_integral(sol, sys, sch, R(zv));
    double scaled = std::fabs(to_double(val)) * std::pow(static_cast<double>(zv), 4.0);
    if (prev > 0) CHECK(scaled < prev * 10.0);
    prev = scaled;
  }
}

TEST_CASE("linear form values: frozen markov case") {
  auto sys1 = markov_m1();
  auto sol = solve_type1(sys1, MultiIndex({2}));
  R z(2);
  // A_0(2) = -1 + (2 - 1/2) shat(2)
  R expect = R(-1) + R(3, 2) * cauchy_transform(sys1.s(1, 1), z);
  CHECK(linear_form(sol, sys1, 0, z) == expect);
  // top form is the plain polynomial
  CHECK(linear_form(sol, sys1, 1, z) == R(3, 2));
}

TEST_CASE("uniqueness scales with the whole family") {
  auto sys = benchmark_m2();
  std::mt19937 rg(99);
  for (int t = 0; t < 4; ++t) {
    std::uniform_int_distribution<int> d(1, 4);
    MultiIndex n({d(rg), d(rg)});
    auto sol = solve_type1(sys, n);
    CHECK(sol.nullspace_dim == 1);
  }
}
