#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "apg/diagnostics/verdict.hpp"
#include "apg/solvers/trace.hpp"

namespace apg {

using Trace = SolverTrace<double>;

/// Reference minimum together with the oracle's error bar.
struct MinEstimate {
  double value{0};
  double error_bar{0};
};

// Per-step ledgers. Each compares consecutive records (n, n + 1) and grants kInequalityTol
// plus a rounding allowance proportional to the size of the terms involved.

/// Descent inequality residual >= 0 at every recorded step.
Verdict check_key_inequality(const Trace& t);

/// sigma_{n+1} <= sigma_n; sigma is the FISTA or the MFISTA energy, as recorded.
Verdict check_sigma_monotone(const Trace& t);

/// (2 gamma)^{-1} (1 - alpha_n^2) |x_n - x_{n-1}|^2 <= sigma_n - sigma_{n+1} (ISTA and FISTA).
Verdict check_descent_ledger(const Trace& t);

/// E_{n+1} <= E_n for the anchored energy; not applicable without an anchor.
Verdict check_lyapunov(const Trace& t);

/// h(x_{n+1}) <= h(x_n) (MFISTA).
Verdict check_mfista_h_monotone(const Trace& t);

/// h(x_{n+1}) + |z_{n+1} - x_n|^2/(2 gamma) <= h(x_n) + tau_n^2 |z_n - x_{n-1}|^2/(2 gamma tau_{n+1}^2).
Verdict check_mfista_one_step(const Trace& t);

/// |u_{n+1}|^2 <= |u_n|^2 + eps_n with eps_n = 2 gamma (tau_n^2 mu_n - tau_{n+1}^2 mu_{n+1}).
/// Excess beyond rounding is accumulated and must stay within `accumulated_tol`; the
/// last-decade spread of |u_n| must be below `oscillation_tol`.
Verdict check_fejer(const Trace& t, double accumulated_tol = 1e-8, double oscillation_tol = 1e-4);

/// beta_z = E_1 for the anchored energy.
std::optional<double> beta_z(const Trace& t);

/// kappa used by the rate certificate: the analytic bound when known, else the realized
/// prefix supremum of n / tau_n.
double trace_kappa(const Trace& t);

/// h(x_n) - min_h <= beta_z kappa^2 / n^2 + 1e-9 at every recorded n. The worst margin is
/// compared with the oracle error bar.
Verdict certify_O_one_over_n2(const Trace& t, const std::optional<MinEstimate>& min_h);

/// Bounded-tau regime.
struct BoundedTauVerdicts {
  Verdict limits;        ///< (a) |sigma_N - h(x_N)| <= 1e-8
  Verdict rate_o_n;      ///< (b) decade maxima of n (h(x_n) - min_h) decrease
  Verdict summable_steps;  ///< (c) Cauchy tails of sum |dx|^2 and sum n |dx|^2
};

/// With inf h = -inf, part (a) asks sigma_N and h(x_N) to both fall below `minus_inf_threshold`.
BoundedTauVerdicts certify_bounded_tau_rates(const Trace& t, const std::optional<MinEstimate>& min_h,
                                             double minus_inf_threshold = -1e6);

/// Decade maxima of `values` over [10^j, 10^{j+1}), j = 0, 1, ...; entries below `floor`
/// count as zero.
std::vector<double> decade_maxima(const std::vector<std::size_t>& n,
                                  const std::vector<double>& values, double floor);

/// o(.) test on decade maxima: a trailing window of at least three decades in which each
/// consecutive pair strictly decreases or is (0, 0), with at least two positive maxima.
bool decade_maxima_vanishing(const std::vector<double>& maxima, std::size_t min_decades = 3);

/// Last decade max below first decade max / `factor` for tau_n^2 (h(x_n) - min_h).
Verdict certify_scaled_gap_vanishing(const Trace& t, const std::optional<MinEstimate>& min_h,
                                     double factor = 100.0);

/// |x_n| eventually increasing (nondecreasing over the last decade) and
/// |x_N| > `ratio` |x_m| at the log-scale midpoint m = sqrt(n_1 n_N).
Verdict certify_divergence(const Trace& t, double ratio = 10.0);

/// Running minimum of h reaches the lower bound: within `tol` of a finite bound, or below
/// `threshold` when the bound is -inf.
Verdict certify_liminf_inf(const Trace& t, const ExtendedReal<double>& lower_bound, double tol,
                           double threshold);

/// Exploratory: does h(x_n) itself (not only its running min) settle at the bound?
Verdict probe_full_limit(const Trace& t, const ExtendedReal<double>& lower_bound, double tol,
                         double threshold);

/// max tau_n |x_n - x_{n-1}| and max |x_n| over the first half of the trace against the
/// whole trace; the doubled run shares its prefix, so this compares N and 2N.
Verdict check_bounded_iterates(const Trace& t, double rel_tol = 1e-3);

/// Rate-fit expectation: fitted p >= expect.
Verdict check_fitted_rate(const Trace& t, const std::optional<MinEstimate>& min_h, double expect);

}  // namespace apg
