#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>

#include "apg/solvers/solvers.hpp"

namespace apg {

/// Largest disagreement between the two estimates that still counts as reliable.
inline constexpr double kOracleAgreement = 1e-8;

template <typename Scalar>
struct ReferenceMin {
  Scalar value{0};
  /// |h(ISTA endpoint) - h(MFISTA endpoint)|.
  Scalar error_bar{0};
  Point<Scalar> argmin;
};

/// min h estimate: `budget` ISTA steps, then `budget` MFISTA (classical) steps from the ISTA
/// endpoint; the smaller final value wins and the two values' gap is the error bar.
template <typename Scalar>
ReferenceMin<Scalar> reference_min(const CompositeProblem<Scalar>& problem, std::size_t budget,
                                   const std::optional<Point<Scalar>>& x0 = std::nullopt) {
  using std::abs;
  const auto& flag = problem.info().known_argmin_nonempty;
  if (flag && !*flag) throw DomainError("reference_min: problem has no minimizer");
  if (budget == 0) throw InvalidArgument("reference_min: budget must be positive");

  SolverConfig<Scalar> cfg;
  cfg.schedule = ScheduleSpec::constant(1.0);
  cfg.max_iters = budget;
  cfg.record_every = budget;
  cfg.x0 = x0;
  const SolverTrace<Scalar> ista = ista_run(problem, cfg);
  if (ista.diverging || ista.records.empty())
    throw OracleUnreliable("reference_min: ISTA run diverged", HUGE_VAL);

  cfg.schedule = ScheduleSpec::classical();
  cfg.x0 = ista.final_x;
  const SolverTrace<Scalar> mono = mfista_run(problem, cfg);
  if (mono.diverging || mono.records.empty())
    throw OracleUnreliable("reference_min: MFISTA run diverged", HUGE_VAL);

  const Scalar h_ista = ista.records.back().h_xn;
  const Scalar h_mono = mono.records.back().h_xn;
  ReferenceMin<Scalar> out;
  out.error_bar = abs(h_ista - h_mono);
  if (h_mono <= h_ista) {
    out.value = h_mono;
    out.argmin = mono.final_x;
  } else {
    out.value = h_ista;
    out.argmin = ista.final_x;
  }
  if (out.error_bar > Scalar(kOracleAgreement)) {
    throw OracleUnreliable("reference_min: estimates disagree by " +
                               std::to_string(static_cast<double>(out.error_bar)),
                           static_cast<double>(out.error_bar));
  }
  return out;
}

}  // namespace apg
