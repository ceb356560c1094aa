#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "apg/solvers/trace.hpp"

namespace apg {

/// gap(n) ~ C n^{-p} fitted over [n_lo, n_hi].
struct RateFit {
  double p{0};
  double C{0};
  std::size_t n_lo{0};
  std::size_t n_hi{0};
  std::size_t points{0};
  /// The gap fell to the resolution floor; the fit used the range before it.
  bool underflow{false};
  std::optional<std::size_t> underflow_n;
};

/// Least squares of log gap against log n over the last two decades of the resolved range.
/// Gaps at or below `floor` count as underflowed; the resolved range ends just before the
/// first such gap. Returns nullopt when fewer than three points remain.
std::optional<RateFit> fit_rate(const std::vector<std::size_t>& n, const std::vector<double>& gap,
                                double floor = 0.0);

/// Resolution floor for h - min_h: the oracle error bar or the rounding level of h.
double gap_floor(double min_h, double error_bar);

std::optional<RateFit> fit_rate(const SolverTrace<double>& trace, double min_h,
                                double error_bar = 0.0);

}  // namespace apg
