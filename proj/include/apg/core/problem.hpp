#pragma once

#include <Eigen/Dense>

#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <utility>

#include "apg/core/errors.hpp"
#include "apg/core/extended_real.hpp"

namespace apg {

template <typename Scalar>
using Point = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

/// Convex, differentiable f with a beta-Lipschitz gradient.
template <typename Scalar>
struct SmoothTerm {
  std::string name;
  std::function<Scalar(const Point<Scalar>&)> value;
  std::function<Point<Scalar>(const Point<Scalar>&)> gradient;
  Scalar lipschitz_beta{1};
  /// Required dimension, or 0 when the term accepts any dimension.
  Eigen::Index dim{0};
};

template <typename Scalar>
struct ProxResult {
  Point<Scalar> point;
  /// Residual of the inner solve; zero for closed-form proxes.
  Scalar inner_residual{0};
  bool converged{true};
};

/// Proper, lower semicontinuous, convex g together with its proximal map
/// (y, gamma) -> argmin_u g(u) + |u - y|^2 / (2 gamma).
template <typename Scalar>
struct NonsmoothTerm {
  std::string name;
  std::function<ExtendedReal<Scalar>(const Point<Scalar>&)> value;
  std::function<ProxResult<Scalar>(const Point<Scalar>&, Scalar)> prox;
  Eigen::Index dim{0};
  bool exact_prox{true};
};

/// Analytic facts about a problem instance, when known.
template <typename Scalar>
struct ProblemInfo {
  std::optional<Scalar> known_min;
  std::optional<bool> known_argmin_nonempty;
  /// inf h, which may be -inf.
  std::optional<ExtendedReal<Scalar>> known_inf;
  /// A minimizer whose value equals known_min.
  std::optional<Point<Scalar>> witness;
};

/// h = f + g with step gamma in (0, 1/beta]. Immutable after construction.
template <typename Scalar>
class CompositeProblem {
 public:
  CompositeProblem(SmoothTerm<Scalar> f, NonsmoothTerm<Scalar> g, Scalar gamma, Eigen::Index dim,
                   ProblemInfo<Scalar> info = {})
      : f_(std::move(f)), g_(std::move(g)), gamma_(gamma), dim_(dim), info_(std::move(info)) {
    if (dim_ < 1) throw InvalidArgument("problem dimension must be at least 1");
    if (f_.dim != 0 && f_.dim != dim_) throw DimensionMismatch(dim_, f_.dim);
    if (g_.dim != 0 && g_.dim != dim_) throw DimensionMismatch(dim_, g_.dim);
    if (!(f_.lipschitz_beta > 0)) throw InvalidArgument("Lipschitz constant must be positive");
    if (!(gamma_ > 0)) throw InvalidArgument("step gamma must be positive");
    const Scalar eps = std::numeric_limits<Scalar>::epsilon();
    if (gamma_ * f_.lipschitz_beta > Scalar(1) + Scalar(4) * eps)
      throw InvalidArgument("step gamma exceeds 1/beta");
    if (info_.witness && info_.witness->size() != dim_)
      throw DimensionMismatch(dim_, info_.witness->size());
  }

  /// Same terms with the largest admissible step gamma = 1/beta.
  CompositeProblem(SmoothTerm<Scalar> f, NonsmoothTerm<Scalar> g, Eigen::Index dim,
                   ProblemInfo<Scalar> info = {})
      : CompositeProblem(f, std::move(g), Scalar(1) / f.lipschitz_beta, dim, std::move(info)) {}

  const SmoothTerm<Scalar>& f() const noexcept { return f_; }
  const NonsmoothTerm<Scalar>& g() const noexcept { return g_; }
  Scalar gamma() const noexcept { return gamma_; }
  Scalar beta() const noexcept { return f_.lipschitz_beta; }
  Eigen::Index dim() const noexcept { return dim_; }
  const ProblemInfo<Scalar>& info() const noexcept { return info_; }

  /// Copy with a different step.
  CompositeProblem with_gamma(Scalar gamma) const {
    return CompositeProblem(f_, g_, gamma, dim_, info_);
  }

  void check_dim(const Point<Scalar>& x) const {
    if (x.size() != dim_) throw DimensionMismatch(dim_, x.size());
  }

 private:
  SmoothTerm<Scalar> f_;
  NonsmoothTerm<Scalar> g_;
  Scalar gamma_;
  Eigen::Index dim_;
  ProblemInfo<Scalar> info_;
};

/// h(x) = f(x) + g(x); +inf outside dom g.
template <typename Scalar>
ExtendedReal<Scalar> evaluate_h(const CompositeProblem<Scalar>& problem, const Point<Scalar>& x) {
  problem.check_dim(x);
  const ExtendedReal<Scalar> gx = problem.g().value(x);
  if (!gx.is_finite()) return gx;
  return ExtendedReal<Scalar>(problem.f().value(x) + gx.value());
}

/// T y = prox_{gamma g}(y - gamma grad f(y)).
template <typename Scalar>
Point<Scalar> forward_backward_step(const CompositeProblem<Scalar>& problem,
                                    const Point<Scalar>& y) {
  problem.check_dim(y);
  if (!y.allFinite()) throw DomainError("forward-backward step at a non-finite point");
  const Scalar gamma = problem.gamma();
  const Point<Scalar> forward = y - gamma * problem.f().gradient(y);
  ProxResult<Scalar> r = problem.g().prox(forward, gamma);
  if (!r.converged) {
    throw ProxError("prox of " + problem.g().name + " did not converge",
                    static_cast<double>(r.inner_residual));
  }
  return std::move(r.point);
}

/// Terms of the one-step descent inequality
///   gamma^{-1} <y - Ty, x - y> + (2 gamma)^{-1} |y - Ty|^2 <= h(x) - h(Ty).
template <typename Scalar>
struct KeyInequalityTerms {
  Scalar residual;   ///< [h(x) - h(Ty)] - [rhs]; non-negative in exact arithmetic
  Scalar magnitude;  ///< sum of absolute term sizes, for rounding allowances
};

/// Residual of the descent inequality given Ty and both h values already evaluated.
template <typename Scalar>
KeyInequalityTerms<Scalar> key_inequality_terms(Scalar gamma, const Point<Scalar>& x,
                                                const Point<Scalar>& y, const Point<Scalar>& ty,
                                                Scalar hx, Scalar hty) {
  using std::abs;
  const Point<Scalar> d = y - ty;
  const Scalar inner = d.dot(x - y) / gamma;
  const Scalar sq = d.squaredNorm() / (Scalar(2) * gamma);
  return {(hx - hty) - (inner + sq), abs(hx) + abs(hty) + abs(inner) + sq};
}

template <typename Scalar>
Scalar key_inequality_residual(const CompositeProblem<Scalar>& problem, const Point<Scalar>& x,
                               const Point<Scalar>& y) {
  const ExtendedReal<Scalar> hx = evaluate_h(problem, x);
  if (!hx.is_finite()) throw DomainError("reference point outside dom h");
  const Point<Scalar> ty = forward_backward_step(problem, y);
  const ExtendedReal<Scalar> hty = evaluate_h(problem, ty);
  if (!hty.is_finite()) throw DomainError("Ty left dom g; prox is inconsistent with g");
  return key_inequality_terms(problem.gamma(), x, y, ty, hx.value(), hty.value()).residual;
}

}  // namespace apg
