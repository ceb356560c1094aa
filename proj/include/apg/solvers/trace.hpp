#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "apg/core/problem.hpp"
#include "apg/schedules/schedule.hpp"

namespace apg {

enum class Algorithm { ista, fista, mfista };

inline std::string to_string(Algorithm a) {
  switch (a) {
    case Algorithm::ista:
      return "ista";
    case Algorithm::fista:
      return "fista";
    case Algorithm::mfista:
      return "mfista";
  }
  return "unknown";
}

inline Algorithm algorithm_from_string(const std::string& name) {
  if (name == "ista") return Algorithm::ista;
  if (name == "fista") return Algorithm::fista;
  if (name == "mfista") return Algorithm::mfista;
  throw InvalidArgument("unknown algorithm '" + name + "'");
}

/// One recorded iteration. For MFISTA, `candidate_step_norm` is |z_n - x_{n-1}| and enters
/// sigma_n; for the other methods it equals `step_norm`.
template <typename Scalar>
struct IterationRecord {
  std::size_t n{0};
  Scalar tau_n{1};
  Scalar tau_next{1};
  Scalar alpha_n{0};
  Scalar h_xn{0};
  Scalar sigma_n{0};
  Scalar step_norm{0};
  Scalar candidate_step_norm{0};
  Scalar x_norm{0};
  /// Descent-inequality residual at x = x_{n-1}, y = y_n; empty when h(x_{n-1}) = +inf.
  std::optional<Scalar> key_residual;
  Scalar key_magnitude{0};
  /// tau_n^2 (h(x_n) - h(z)) + |u_n|^2 / (2 gamma) for the configured anchor z.
  std::optional<Scalar> lyapunov_E;
  Scalar lyapunov_magnitude{0};
  /// |u_n|, the distance between tau_n x_n - (tau_n - 1) x_{n-1} and the anchor.
  std::optional<Scalar> u_norm;
};

template <typename Scalar>
struct SolverTrace {
  Algorithm algorithm{Algorithm::fista};
  ScheduleSpec schedule;
  std::optional<Scalar> tau_infinity;
  std::optional<Scalar> kappa_bound;
  Scalar gamma{1};
  Point<Scalar> x0;
  std::optional<bool> argmin_nonempty;
  std::optional<ExtendedReal<Scalar>> known_inf;
  std::optional<Scalar> anchor_h;

  std::vector<IterationRecord<Scalar>> records;
  std::size_t iterations{0};
  /// Set when an iterate left the representable range; the trace stops before it.
  bool diverging{false};
  Point<Scalar> final_x;
  /// x_N - x_{N-1} at the last completed iteration.
  Point<Scalar> displacement;

  bool has_anchor() const { return anchor_h.has_value(); }
};

}  // namespace apg
