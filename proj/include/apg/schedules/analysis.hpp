#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "apg/schedules/schedule.hpp"

namespace apg {

/// Per-index quantities derived from a prefix tau_1..tau_{N+1}; every vector has N entries,
/// entry k describing the pair (tau_{k+1}, tau_{k+2}) in one-based terms.
struct ScheduleDiagnostics {
  std::vector<double> alpha;            ///< (tau_n - 1) / tau_{n+1}
  std::vector<double> sup_n_over_tau;   ///< running sup_{k<=n} k / tau_k
  std::vector<double> attouch_delta;    ///< running max (tau_{k+1}^2 - tau_k^2) / tau_{k+1}
  std::vector<double> blowsup_sum;      ///< running sum of 1 - tau_k^2 / tau_{k+1}^2
};

ScheduleDiagnostics analyze_prefix(const std::vector<double>& taus);

/// Worst violations of the consequences of the bracket over a prefix. Violations are
/// lhs - rhs (non-positive when the inequality holds), and the `*_ok` flags apply the
/// relative tolerance with rounding allowance.
struct ScheduleInequalityReport {
  double worst_lower{0};       ///< tau_n - tau_{n+1}
  double worst_upper{0};       ///< tau_{n+1} - (1 + sqrt(1 + 4 tau_n^2)) / 2
  double worst_rewrite{0};     ///< tau_{n+1}^2 - tau_{n+1} - tau_n^2
  double worst_difference{0};  ///< tau_{n+1} - tau_n - (1 + sqrt 5) / 4
  bool tau1_ok{true};
  bool bracket_ok{true};
  bool rewrite_ok{true};
  bool difference_ok{true};
  std::optional<std::size_t> first_failure;

  bool all_ok() const { return tau1_ok && bracket_ok && rewrite_ok && difference_ok; }
};

ScheduleInequalityReport check_schedule_inequalities(const std::vector<double>& taus,
                                                     double tol = kScheduleTol);

struct ClassicalBoundVerdict {
  bool passed{true};
  std::optional<std::size_t> first_violation;  ///< one-based n
  double sup_n_over_tau{0};
  double tau_over_n_at_end{0};
};

/// Confirms tau_n >= (n + 1) / 2 and sup n / tau_n <= 2 for the classical sequence with
/// tau_1 = 1, n = 1..n_max.
ClassicalBoundVerdict classical_lower_bound_check(std::size_t n_max);

/// r_n = n ((tau_n - 1) / tau_{n+1} - 1 + 3 / n) for the classical schedule, n = 1..n_max.
std::vector<double> folklore_expansion_check(std::size_t n_max);

/// max_k (tau_{k+1}^2 - tau_k^2) / tau_{k+1}; zero for a prefix of length < 2.
double attouch_condition_delta(const std::vector<double>& taus);

/// sum_k (1 - tau_k^2 / tau_{k+1}^2) over consecutive pairs.
double blowsup_partial_sums(const std::vector<double>& taus);

struct QuotientBoundsVerdict {
  bool passed{true};
  std::optional<std::size_t> first_violation;  ///< one-based n
  double worst_violation{0};
  bool limit_checked{false};  ///< tail compared with the tau_infinity limits
};

/// Bounds on alpha_n = (tau_n - 1) / tau_{n+1}: the pointwise chain
///   (tau_n - 1)/(tau_n + 1) - 1/(tau_{n+1}(tau_n + 1)) <= alpha_n <= 1 - 1/tau_{n+1} <= 1 - 1/tau_inf
/// for every n, and, when `tau_infinity` is finite and the prefix has stopped growing,
/// the tail against the liminf bound at tau_infinity.
QuotientBoundsVerdict quotient_bounds_check(const std::vector<double>& taus,
                                            std::optional<double> tau_infinity);

/// Worst |tau_n^2 - tau_{n+1}^2 + tau_{n+1} - ((rho - 2) n + (rho - 1)^2) / rho^2|,
/// relative to max(1, tau_{n+1}^2), over n = 1..n_max for tau_n = (n + rho - 1) / rho.
double chambolle_dossal_identity_residual(double rho, std::size_t n_max);

}  // namespace apg
