#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <utility>

#include "apg/core/problem.hpp"
#include "apg/schedules/schedule.hpp"
#include "apg/solvers/trace.hpp"

namespace apg {

enum class StopRule { none, step_norm, h_gap };

template <typename Scalar>
struct SolverConfig {
  Algorithm algorithm{Algorithm::fista};
  ScheduleSpec schedule{ScheduleSpec::classical()};
  std::size_t max_iters{1000};
  StopRule stop{StopRule::none};
  Scalar stop_tol{0};
  /// Reference point z for the Lyapunov energy and the Fejer ledger.
  std::optional<Point<Scalar>> anchor;
  std::size_t record_every{1};
  /// Starting point; zero when absent.
  std::optional<Point<Scalar>> x0;
};

/// Iterates whose norm exceeds this are treated as diverged.
inline constexpr double kDivergenceNorm = 1e150;

namespace detail {

template <typename Scalar>
bool diverged(const Point<Scalar>& x) {
  using std::isfinite;
  return !x.allFinite() || !(x.norm() <= Scalar(kDivergenceNorm));
}

// h at an iterate; nullopt when f overflows, so the caller can truncate the run.
template <typename Scalar>
std::optional<ExtendedReal<Scalar>> try_h(const CompositeProblem<Scalar>& p, const Point<Scalar>& x) {
  using std::isfinite;
  const Scalar fx = p.f().value(x);
  if (!isfinite(fx)) return std::nullopt;
  const ExtendedReal<Scalar> gx = p.g().value(x);
  if (!gx.is_finite()) return gx;
  const Scalar hx = fx + gx.value();
  if (!isfinite(hx)) return std::nullopt;
  return ExtendedReal<Scalar>(hx);
}

template <typename Scalar>
SolverTrace<Scalar> start_trace(const CompositeProblem<Scalar>& p, const SolverConfig<Scalar>& c,
                                const Schedule<Scalar>& schedule) {
  SolverTrace<Scalar> t;
  t.algorithm = c.algorithm;
  t.schedule = c.schedule;
  t.tau_infinity = schedule.tau_infinity();
  t.kappa_bound = schedule.kappa_bound();
  t.gamma = p.gamma();
  t.x0 = c.x0 ? *c.x0 : Point<Scalar>::Zero(p.dim());
  p.check_dim(t.x0);
  if (!t.x0.allFinite()) throw DomainError("starting point must be finite");
  t.argmin_nonempty = p.info().known_argmin_nonempty;
  t.known_inf = p.info().known_inf;
  if (c.anchor) {
    p.check_dim(*c.anchor);
    const ExtendedReal<Scalar> hz = evaluate_h(p, *c.anchor);
    if (!hz.is_finite()) throw DomainError("anchor outside dom h");
    t.anchor_h = hz.value();
  }
  if (c.record_every == 0) throw InvalidArgument("record_every must be positive");
  return t;
}

template <typename Scalar>
bool should_record(std::size_t n, std::size_t every, std::size_t max_iters) {
  return n == 1 || n % every == 0 || n == max_iters;
}

template <typename Scalar>
bool stop_now(const SolverConfig<Scalar>& c, const CompositeProblem<Scalar>& p, Scalar step,
              Scalar hx) {
  switch (c.stop) {
    case StopRule::none:
      return false;
    case StopRule::step_norm:
      return step < c.stop_tol;
    case StopRule::h_gap:
      return p.info().known_min && hx - *p.info().known_min < c.stop_tol;
  }
  return false;
}

// Lyapunov energy with u = tau * lead - (tau - 1) x_prev - z.
template <typename Scalar>
void attach_lyapunov(IterationRecord<Scalar>& r, const SolverConfig<Scalar>& c, Scalar gamma,
                     Scalar anchor_h, const Point<Scalar>& lead, const Point<Scalar>& x_prev) {
  using std::abs;
  const Point<Scalar> u = r.tau_n * lead - (r.tau_n - Scalar(1)) * x_prev - *c.anchor;
  const Scalar usq = u.squaredNorm();
  const Scalar t2 = r.tau_n * r.tau_n;
  r.u_norm = std::sqrt(usq);
  r.lyapunov_E = t2 * (r.h_xn - anchor_h) + usq / (Scalar(2) * gamma);
  r.lyapunov_magnitude = t2 * (abs(r.h_xn) + abs(anchor_h)) + usq / (Scalar(2) * gamma);
}

// Shared engine for ISTA and FISTA: x_n = T y_n, y_{n+1} = x_n + alpha_n (x_n - x_{n-1}).
template <typename Scalar>
SolverTrace<Scalar> run_extrapolated(const CompositeProblem<Scalar>& p,
                                     const SolverConfig<Scalar>& c) {
  Schedule<Scalar> schedule(c.schedule);
  SolverTrace<Scalar> t = start_trace(p, c, schedule);
  const Scalar gamma = p.gamma();

  Point<Scalar> x_prev = t.x0;
  Point<Scalar> y = t.x0;
  std::optional<ExtendedReal<Scalar>> h_prev = try_h(p, x_prev);
  Scalar tau = schedule.tau();
  t.final_x = x_prev;
  t.displacement = Point<Scalar>::Zero(p.dim());

  for (std::size_t n = 1; n <= c.max_iters; ++n) {
    Point<Scalar> x = forward_backward_step(p, y);
    if (diverged(x)) {
      t.diverging = true;
      break;
    }
    const std::optional<ExtendedReal<Scalar>> hx_ext = try_h(p, x);
    if (!hx_ext) {
      t.diverging = true;
      break;
    }
    if (!hx_ext->is_finite()) throw DomainError("Ty left dom g; prox is inconsistent with g");
    const Scalar hx = hx_ext->value();
    const Scalar tau_next = schedule.next_tau();
    const Scalar alpha = (tau - Scalar(1)) / tau_next;
    const Point<Scalar> dx = x - x_prev;
    const Scalar step = dx.norm();

    if (should_record<Scalar>(n, c.record_every, c.max_iters)) {
      IterationRecord<Scalar> r;
      r.n = n;
      r.tau_n = tau;
      r.tau_next = tau_next;
      r.alpha_n = alpha;
      r.h_xn = hx;
      r.sigma_n = hx + step * step / (Scalar(2) * gamma);
      r.step_norm = step;
      r.candidate_step_norm = step;
      r.x_norm = x.norm();
      if (h_prev && h_prev->is_finite()) {
        const KeyInequalityTerms<Scalar> k =
            key_inequality_terms(gamma, x_prev, y, x, h_prev->value(), hx);
        r.key_residual = k.residual;
        r.key_magnitude = k.magnitude;
      }
      if (t.anchor_h) attach_lyapunov(r, c, gamma, *t.anchor_h, x, x_prev);
      t.records.push_back(std::move(r));
    }

    y = x + alpha * dx;
    t.iterations = n;
    t.displacement = dx;
    x_prev = std::move(x);
    h_prev = hx_ext;
    tau = tau_next;
    if (stop_now(c, p, step, hx)) break;
  }
  t.final_x = x_prev;
  return t;
}

}  // namespace detail

/// FISTA: y_1 = x_0, x_n = T y_n, y_{n+1} = x_n + ((tau_n - 1) / tau_{n+1}) (x_n - x_{n-1}).
template <typename Scalar>
SolverTrace<Scalar> fista_run(const CompositeProblem<Scalar>& problem, SolverConfig<Scalar> config) {
  config.algorithm = Algorithm::fista;
  return detail::run_extrapolated(problem, config);
}

/// Proximal gradient x_n = T x_{n-1}; the schedule must be constant 1.
template <typename Scalar>
SolverTrace<Scalar> ista_run(const CompositeProblem<Scalar>& problem, SolverConfig<Scalar> config) {
  const ScheduleSpec& s = config.schedule;
  if (s.kind != ScheduleKind::constant || s.tau != 1.0)
    throw InvalidArgument("ista requires the constant schedule tau = 1");
  config.algorithm = Algorithm::ista;
  return detail::run_extrapolated(problem, config);
}

/// Monotone FISTA: z_n = T y_n, x_n keeps x_{n-1} unless z_n strictly lowers h, and
/// y_{n+1} = x_n + (tau_n / tau_{n+1})(z_n - x_n) + ((tau_n - 1) / tau_{n+1})(x_n - x_{n-1}).
template <typename Scalar>
SolverTrace<Scalar> mfista_run(const CompositeProblem<Scalar>& p, SolverConfig<Scalar> c) {
  c.algorithm = Algorithm::mfista;
  Schedule<Scalar> schedule(c.schedule);
  SolverTrace<Scalar> t = detail::start_trace(p, c, schedule);
  const Scalar gamma = p.gamma();

  Point<Scalar> x_prev = t.x0;
  Point<Scalar> y = t.x0;
  std::optional<ExtendedReal<Scalar>> h_prev = detail::try_h(p, x_prev);
  if (!h_prev) throw DomainError("h overflows at the starting point");
  Scalar tau = schedule.tau();
  t.final_x = x_prev;
  t.displacement = Point<Scalar>::Zero(p.dim());

  for (std::size_t n = 1; n <= c.max_iters; ++n) {
    Point<Scalar> z = forward_backward_step(p, y);
    if (detail::diverged(z)) {
      t.diverging = true;
      break;
    }
    const std::optional<ExtendedReal<Scalar>> hz_ext = detail::try_h(p, z);
    if (!hz_ext) {
      t.diverging = true;
      break;
    }
    if (!hz_ext->is_finite()) throw DomainError("Ty left dom g; prox is inconsistent with g");
    const Scalar hz = hz_ext->value();
    // Ties keep the old iterate.
    const bool keep = *h_prev <= *hz_ext;
    Point<Scalar> x = keep ? x_prev : z;
    const Scalar hx = keep ? h_prev->value() : hz;
    const Scalar tau_next = schedule.next_tau();
    const Scalar alpha = (tau - Scalar(1)) / tau_next;
    const Point<Scalar> dx = x - x_prev;
    const Scalar step = dx.norm();
    const Scalar candidate = (z - x_prev).norm();

    if (detail::should_record<Scalar>(n, c.record_every, c.max_iters)) {
      IterationRecord<Scalar> r;
      r.n = n;
      r.tau_n = tau;
      r.tau_next = tau_next;
      r.alpha_n = alpha;
      r.h_xn = hx;
      r.sigma_n = hx + candidate * candidate / (Scalar(2) * gamma);
      r.step_norm = step;
      r.candidate_step_norm = candidate;
      r.x_norm = x.norm();
      if (h_prev->is_finite()) {
        const KeyInequalityTerms<Scalar> k =
            key_inequality_terms(gamma, x_prev, y, z, h_prev->value(), hz);
        r.key_residual = k.residual;
        r.key_magnitude = k.magnitude;
      }
      if (t.anchor_h) detail::attach_lyapunov(r, c, gamma, *t.anchor_h, z, x_prev);
      t.records.push_back(std::move(r));
    }

    y = x + (tau / tau_next) * (z - x) + alpha * dx;
    t.iterations = n;
    t.displacement = dx;
    x_prev = std::move(x);
    h_prev = ExtendedReal<Scalar>(hx);
    tau = tau_next;
    // A kept iterate has zero step; the candidate step is the progress measure.
    if (detail::stop_now(c, p, candidate, hx)) break;
  }
  t.final_x = x_prev;
  return t;
}

/// Dispatches on config.algorithm.
template <typename Scalar>
SolverTrace<Scalar> solve(const CompositeProblem<Scalar>& problem, const SolverConfig<Scalar>& config) {
  switch (config.algorithm) {
    case Algorithm::ista:
      return ista_run(problem, config);
    case Algorithm::fista:
      return fista_run(problem, config);
    case Algorithm::mfista:
      return mfista_run(problem, config);
  }
  throw InvalidArgument("unknown algorithm");
}

}  // namespace apg
