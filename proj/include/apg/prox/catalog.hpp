#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <memory>
#include <random>
#include <string>
#include <utility>

#include "apg/core/errors.hpp"
#include "apg/core/problem.hpp"

namespace apg {

/// Largest eigenvalue of a symmetric positive semidefinite matrix by power iteration,
/// stopped once the Rayleigh quotient changes by less than `rel_tol` relatively.
template <typename Scalar>
Scalar largest_eigenvalue_psd(const Matrix<Scalar>& a, Scalar rel_tol = Scalar(1e-12),
                              int max_iters = 1000000) {
  using std::abs;
  const Eigen::Index n = a.rows();
  if (n == 0) return Scalar(0);
  // Deterministic start with no special alignment to coordinate axes.
  std::mt19937_64 rng(0x5eedULL);
  std::uniform_real_distribution<double> unif(0.5, 1.5);
  Point<Scalar> v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = Scalar(unif(rng));
  v.normalize();
  Scalar lambda = v.dot(a * v);
  // The quotient converges monotonically from below; demand a few consecutive quiet steps.
  int quiet = 0;
  for (int it = 0; it < max_iters; ++it) {
    Point<Scalar> w = a * v;
    const Scalar norm = w.norm();
    if (norm == Scalar(0)) return Scalar(0);
    v = w / norm;
    const Scalar next = v.dot(a * v);
    const bool small = abs(next - lambda) <= rel_tol * Scalar(1e-3) * abs(next);
    lambda = next;
    quiet = small ? quiet + 1 : 0;
    if (quiet >= 3) break;
  }
  return lambda;
}

/// f(x) = 1/2 <Ax, x> - <b, x> for symmetric positive semidefinite A.
template <typename Scalar>
SmoothTerm<Scalar> make_quadratic(const Matrix<Scalar>& a, const Point<Scalar>& b) {
  if (a.rows() != a.cols()) throw InvalidArgument("quadratic: A must be square");
  if (b.size() != a.rows()) throw DimensionMismatch(a.rows(), b.size());
  const Scalar scale = std::max(Scalar(1), a.norm());
  if ((a - a.transpose()).norm() > Scalar(1e-12) * scale)
    throw InvalidArgument("quadratic: A must be symmetric");
  Scalar beta = largest_eigenvalue_psd<Scalar>(a);
  // A constant gradient is Lipschitz with every positive constant.
  if (!(beta > 0)) beta = Scalar(1);
  auto data = std::make_shared<const std::pair<Matrix<Scalar>, Point<Scalar>>>(a, b);
  SmoothTerm<Scalar> f;
  f.name = "quadratic";
  f.dim = a.rows();
  f.lipschitz_beta = beta;
  f.value = [data](const Point<Scalar>& x) {
    return Scalar(0.5) * x.dot(data->first * x) - data->second.dot(x);
  };
  f.gradient = [data](const Point<Scalar>& x) -> Point<Scalar> {
    return data->first * x - data->second;
  };
  return f;
}

/// f(x) = 1/2 |Ax - b|^2 with beta = largest eigenvalue of A^T A.
template <typename Scalar>
SmoothTerm<Scalar> make_least_squares(const Matrix<Scalar>& a, const Point<Scalar>& b) {
  if (b.size() != a.rows()) throw DimensionMismatch(a.rows(), b.size());
  auto data = std::make_shared<const std::pair<Matrix<Scalar>, Point<Scalar>>>(a, b);
  SmoothTerm<Scalar> f;
  f.name = "least-squares";
  f.dim = a.cols();
  const Matrix<Scalar> gram = a.transpose() * a;
  f.lipschitz_beta = largest_eigenvalue_psd<Scalar>(gram);
  if (!(f.lipschitz_beta > 0)) f.lipschitz_beta = Scalar(1);
  f.value = [data](const Point<Scalar>& x) {
    return Scalar(0.5) * (data->first * x - data->second).squaredNorm();
  };
  f.gradient = [data](const Point<Scalar>& x) -> Point<Scalar> {
    return data->first.transpose() * (data->first * x - data->second);
  };
  return f;
}

/// f(x) = -x on the real line. inf h = -inf with g = 0.
template <typename Scalar>
SmoothTerm<Scalar> make_affine_descent(Scalar declared_beta = Scalar(1)) {
  if (!(declared_beta > 0)) throw InvalidArgument("affine-descent: beta must be positive");
  SmoothTerm<Scalar> f;
  f.name = "affine-descent";
  f.dim = 1;
  f.lipschitz_beta = declared_beta;
  f.value = [](const Point<Scalar>& x) { return -x(0); };
  f.gradient = [](const Point<Scalar>&) -> Point<Scalar> {
    return Point<Scalar>::Constant(1, Scalar(-1));
  };
  return f;
}

/// f(x) = sqrt(1 + x^2) - x: convex, beta = 1, inf f = 0 and not attained.
template <typename Scalar>
SmoothTerm<Scalar> make_unattained_infimum() {
  SmoothTerm<Scalar> f;
  f.name = "unattained";
  f.dim = 1;
  f.lipschitz_beta = Scalar(1);
  f.value = [](const Point<Scalar>& p) {
    using std::hypot;
    const Scalar x = p(0);
    const Scalar s = hypot(Scalar(1), x);
    // Rationalised form avoids cancellation for large positive x.
    return x >= 0 ? Scalar(1) / (s + x) : s - x;
  };
  f.gradient = [](const Point<Scalar>& p) -> Point<Scalar> {
    using std::hypot;
    const Scalar x = p(0);
    const Scalar s = hypot(Scalar(1), x);
    const Scalar d = x >= 0 ? Scalar(-1) / (s * (s + x)) : x / s - Scalar(1);
    return Point<Scalar>::Constant(1, d);
  };
  return f;
}

template <typename Scalar>
NonsmoothTerm<Scalar> make_zero(Eigen::Index dim = 0) {
  NonsmoothTerm<Scalar> g;
  g.name = "zero";
  g.dim = dim;
  g.value = [](const Point<Scalar>&) { return ExtendedReal<Scalar>(Scalar(0)); };
  g.prox = [](const Point<Scalar>& y, Scalar) { return ProxResult<Scalar>{y}; };
  return g;
}

/// g(x) = weight * |x|_1; prox is componentwise soft-thresholding at gamma * weight.
template <typename Scalar>
NonsmoothTerm<Scalar> make_l1(Scalar weight = Scalar(1), Eigen::Index dim = 0) {
  if (!(weight >= 0)) throw InvalidArgument("l1: weight must be non-negative");
  NonsmoothTerm<Scalar> g;
  g.name = "l1";
  g.dim = dim;
  g.value = [weight](const Point<Scalar>& x) {
    return ExtendedReal<Scalar>(weight * x.template lpNorm<1>());
  };
  g.prox = [weight](const Point<Scalar>& y, Scalar gamma) {
    const Scalar t = gamma * weight;
    Point<Scalar> u = y.unaryExpr([t](Scalar v) {
      using std::abs;
      const Scalar m = abs(v) - t;
      return m > 0 ? (v > 0 ? m : -m) : Scalar(0);
    });
    return ProxResult<Scalar>{std::move(u)};
  };
  return g;
}

/// Indicator of the box [lo, hi]; prox is the componentwise clamp.
template <typename Scalar>
NonsmoothTerm<Scalar> make_indicator_box(const Point<Scalar>& lo, const Point<Scalar>& hi) {
  if (lo.size() != hi.size()) throw DimensionMismatch(lo.size(), hi.size());
  for (Eigen::Index i = 0; i < lo.size(); ++i) {
    if (lo(i) > hi(i))
      throw InvalidArgument("box: lo > hi at component " + std::to_string(i));
  }
  auto bounds = std::make_shared<const std::pair<Point<Scalar>, Point<Scalar>>>(lo, hi);
  NonsmoothTerm<Scalar> g;
  g.name = "box";
  g.dim = lo.size();
  g.value = [bounds](const Point<Scalar>& x) {
    const bool inside = (x.array() >= bounds->first.array()).all() &&
                        (x.array() <= bounds->second.array()).all();
    return inside ? ExtendedReal<Scalar>(Scalar(0)) : ExtendedReal<Scalar>::plus_infinity();
  };
  g.prox = [bounds](const Point<Scalar>& y, Scalar) {
    Point<Scalar> u = y.cwiseMax(bounds->first).cwiseMin(bounds->second);
    return ProxResult<Scalar>{std::move(u)};
  };
  return g;
}

// ---------------------------------------------------------------------------------------
// Ready-made composite problems with their analytic metadata.

template <typename Scalar>
struct LassoData {
  Matrix<Scalar> a;
  Point<Scalar> b;
  Scalar weight;
};

/// Fixed-seed Gaussian lasso: 2*dim observations of a sparse signal plus noise, with
/// l1 weight 0.1 |A^T b|_inf.
template <typename Scalar>
LassoData<Scalar> make_lasso_data(Eigen::Index dim, std::uint64_t seed) {
  if (dim < 1) throw InvalidArgument("lasso: dimension must be positive");
  const Eigen::Index rows = 2 * dim;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  LassoData<Scalar> out;
  out.a.resize(rows, dim);
  const double scale = 1.0 / std::sqrt(static_cast<double>(rows));
  for (Eigen::Index j = 0; j < dim; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) out.a(i, j) = Scalar(normal(rng) * scale);
  Point<Scalar> truth = Point<Scalar>::Zero(dim);
  const Eigen::Index support = std::max<Eigen::Index>(1, dim / 5);
  for (Eigen::Index j = 0; j < support; ++j) truth(j) = Scalar(normal(rng));
  out.b = out.a * truth;
  for (Eigen::Index i = 0; i < rows; ++i) out.b(i) += Scalar(0.1 * normal(rng));
  out.weight = Scalar(0.1) * (out.a.transpose() * out.b).cwiseAbs().maxCoeff();
  return out;
}

template <typename Scalar>
CompositeProblem<Scalar> lasso_problem(Eigen::Index dim, std::uint64_t seed) {
  LassoData<Scalar> data = make_lasso_data<Scalar>(dim, seed);
  ProblemInfo<Scalar> info;
  // l1 with positive weight is coercive.
  info.known_argmin_nonempty = data.weight > 0;
  return CompositeProblem<Scalar>(make_least_squares<Scalar>(data.a, data.b),
                                  make_l1<Scalar>(data.weight, dim), dim, std::move(info));
}

/// Quadratic with g = 0. For positive definite A the minimizer A^{-1} b is recorded.
template <typename Scalar>
CompositeProblem<Scalar> quadratic_problem(const Matrix<Scalar>& a, const Point<Scalar>& b) {
  SmoothTerm<Scalar> f = make_quadratic<Scalar>(a, b);
  ProblemInfo<Scalar> info;
  Eigen::LLT<Matrix<Scalar>> llt(a);
  if (llt.info() == Eigen::Success) {
    Point<Scalar> z = llt.solve(b);
    info.known_argmin_nonempty = true;
    info.known_min = Scalar(-0.5) * b.dot(z);
    info.known_inf = ExtendedReal<Scalar>(*info.known_min);
    info.witness = std::move(z);
  }
  return CompositeProblem<Scalar>(std::move(f), make_zero<Scalar>(a.rows()), a.rows(),
                                  std::move(info));
}

/// f(x) = -x, g = 0, gamma = 1: the iterates run off to +inf.
template <typename Scalar>
CompositeProblem<Scalar> affine_descent_problem(Scalar gamma = Scalar(1)) {
  ProblemInfo<Scalar> info;
  info.known_argmin_nonempty = false;
  info.known_inf = ExtendedReal<Scalar>::minus_infinity();
  return CompositeProblem<Scalar>(make_affine_descent<Scalar>(Scalar(1) / gamma),
                                  make_zero<Scalar>(1), gamma, 1, std::move(info));
}

/// f(x) = sqrt(1 + x^2) - x, g = 0: inf h = 0, Argmin h empty.
template <typename Scalar>
CompositeProblem<Scalar> unattained_problem() {
  ProblemInfo<Scalar> info;
  info.known_argmin_nonempty = false;
  info.known_inf = ExtendedReal<Scalar>(Scalar(0));
  return CompositeProblem<Scalar>(make_unattained_infimum<Scalar>(), make_zero<Scalar>(1), 1,
                                  std::move(info));
}

}  // namespace apg
