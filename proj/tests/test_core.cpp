#include <doctest.h>

#include <cmath>
#include <random>

#include "apg/core/problem.hpp"
#include "apg/core/tolerance.hpp"
#include "apg/prox/catalog.hpp"
#include "oracles.hpp"

using apg::CompositeProblem;
using apg::ExtendedReal;
using Vec = apg::Point<double>;

namespace {

Vec v1(double x) { return Vec::Constant(1, x); }

CompositeProblem<double> half_square(double gamma = 1.0) {
  return CompositeProblem<double>(apg::make_quadratic<double>(Eigen::MatrixXd::Identity(1, 1), Vec::Zero(1)),
                                  apg::make_zero<double>(1), gamma, 1);
}

// (x - 2)^2 / 2 + |x|
CompositeProblem<double> shifted_abs() {
  return CompositeProblem<double>(apg::make_quadratic<double>(Eigen::MatrixXd::Identity(1, 1), v1(2.0)),
                                  apg::make_l1<double>(1.0, 1), 1.0, 1);
}

}  // namespace

TEST_CASE("extended reals order and never leak infinities into arithmetic") {
  const auto inf = ExtendedReal<double>::plus_infinity();
  const auto minf = ExtendedReal<double>::minus_infinity();
  const ExtendedReal<double> two(2.0);
  CHECK(minf < two);
  CHECK(two < inf);
  CHECK_FALSE(inf.is_finite());
  CHECK(inf.is_plus_infinity());
  CHECK(two.value() == 2.0);
}

TEST_CASE("evaluate_h") {
  CHECK(apg::evaluate_h(half_square(), v1(3.0)).value() == 4.5);

  const auto affine = apg::affine_descent_problem<double>();
  CHECK(apg::evaluate_h(affine, v1(2.0)).value() == -2.0);

  CompositeProblem<double> boxed(apg::make_quadratic<double>(Eigen::MatrixXd::Identity(1, 1), Vec::Zero(1)),
                                 apg::make_indicator_box<double>(v1(1.0), v1(2.0)), 1.0, 1);
  CHECK(apg::evaluate_h(boxed, v1(0.0)).is_plus_infinity());
  CHECK(apg::evaluate_h(boxed, v1(1.5)).value() == doctest::Approx(1.125));

  CHECK_THROWS_AS(apg::evaluate_h(half_square(), Vec(Vec::Zero(2))), apg::DimensionMismatch);
}

TEST_CASE("forward-backward step") {
  CHECK(apg::forward_backward_step(half_square(), v1(3.0))(0) == 0.0);
  CHECK(apg::forward_backward_step(apg::affine_descent_problem<double>(), v1(5.0))(0) == 6.0);

  // prox of |u| at y - (y - 2) = 2 with gamma 1, against the grid + golden-section oracle.
  const double expected =
      oracle::prox_1d([](double u) { return std::abs(u); }, 2.0 - (2.0 - 2.0), 1.0);
  const double got = apg::forward_backward_step(shifted_abs(), v1(2.0))(0);
  CHECK(got == doctest::Approx(1.0).epsilon(1e-12));
  // Golden section on function values resolves the argmin to about sqrt(eps).
  CHECK(std::abs(got - expected) < 1e-7);

  CHECK_THROWS_AS(apg::forward_backward_step(half_square(), Vec(Vec::Zero(3))), apg::DimensionMismatch);
}

TEST_CASE("non-converged prox surfaces its residual") {
  apg::NonsmoothTerm<double> g = apg::make_zero<double>(1);
  g.exact_prox = false;
  g.prox = [](const Vec& y, double) { return apg::ProxResult<double>{y, 0.25, false}; };
  CompositeProblem<double> p(apg::make_quadratic<double>(Eigen::MatrixXd::Identity(1, 1), Vec::Zero(1)), g, 1.0, 1);
  try {
    apg::forward_backward_step(p, v1(1.0));
    FAIL("expected ProxError");
  } catch (const apg::ProxError& e) {
    CHECK(e.residual() == 0.25);
  }
}

TEST_CASE("key inequality residual") {
  CHECK(apg::key_inequality_residual(half_square(), v1(0.0), v1(0.0)) == 0.0);

  // Hand evaluation: Ty = 1, h(0) - h(1) = 1, rhs = <0 - 1, 0 - 0> + 1/2.
  const double r = apg::key_inequality_residual(apg::affine_descent_problem<double>(), v1(0.0), v1(0.0));
  const double independent = (0.0 - (-1.0)) - ((0.0 - 1.0) * (0.0 - 0.0) + 0.5 * 1.0);
  CHECK(r == independent);
  CHECK(r == 0.5);

  CompositeProblem<double> boxed(apg::make_quadratic<double>(Eigen::MatrixXd::Identity(1, 1), Vec::Zero(1)),
                                 apg::make_indicator_box<double>(v1(1.0), v1(2.0)), 1.0, 1);
  CHECK_THROWS_WITH_AS(apg::key_inequality_residual(boxed, v1(0.0), v1(1.5)),
                       "reference point outside dom h", apg::DomainError);
}

TEST_CASE("key inequality on random lasso pairs") {
  const auto p = apg::lasso_problem<double>(10, 7);
  std::mt19937_64 rng(11);
  std::normal_distribution<double> normal(0.0, 3.0);
  double worst = HUGE_VAL;
  for (int k = 0; k < 100; ++k) {
    Vec x(10), y(10);
    for (int i = 0; i < 10; ++i) {
      x(i) = normal(rng);
      y(i) = normal(rng);
    }
    worst = std::min(worst, apg::key_inequality_residual(p, x, y));
  }
  CHECK(worst >= -apg::kInequalityTol);
}

TEST_CASE("step gamma must not exceed 1/beta") {
  auto f = apg::make_quadratic<double>(Eigen::MatrixXd::Identity(1, 1) * 4.0, Vec::Zero(1));
  CHECK_THROWS_AS(CompositeProblem<double>(f, apg::make_zero<double>(1), 0.5, 1), apg::InvalidArgument);
  CHECK_NOTHROW(CompositeProblem<double>(f, apg::make_zero<double>(1), 0.25, 1));
  CHECK_THROWS_AS(CompositeProblem<double>(f, apg::make_zero<double>(1), 0.0, 1), apg::InvalidArgument);
  CHECK_THROWS_AS(CompositeProblem<double>(f, apg::make_zero<double>(2), 0.25, 1), apg::DimensionMismatch);
  const auto p = CompositeProblem<double>(f, apg::make_zero<double>(1), 1);
  CHECK(p.gamma() == doctest::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("minimizers are fixed points of T") {
  Eigen::MatrixXd a(2, 2);
  a << 2, 1, 1, 2;
  Vec b(2);
  b << 4, -3;
  const auto p = apg::quadratic_problem<double>(a, b);
  REQUIRE(p.info().witness);
  const Vec z = *p.info().witness;
  CHECK((apg::forward_backward_step(p, z) - z).norm() <= apg::kInequalityTol);
}

TEST_CASE("long double instantiation") {
  using LD = long double;
  using VecL = apg::Point<LD>;
  CompositeProblem<LD> p(apg::make_quadratic<LD>(apg::Matrix<LD>::Identity(1, 1), VecL(VecL::Constant(1, 2.0L))),
                         apg::make_l1<LD>(1.0L, 1), 1.0L, 1);
  const VecL ty = apg::forward_backward_step(p, VecL(VecL::Constant(1, 2.0L)));
  CHECK(static_cast<double>(ty(0)) == 1.0);
  CHECK(apg::key_inequality_residual(p, VecL(VecL::Constant(1, 0.0L)), VecL(VecL::Constant(1, 2.0L))) >= -1e-18L);
}
