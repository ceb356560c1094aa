#include "apg/diagnostics/fit_rate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "apg/core/tolerance.hpp"

namespace apg {

std::optional<RateFit> fit_rate(const std::vector<std::size_t>& n, const std::vector<double>& gap,
                                double floor) {
  if (n.size() != gap.size()) throw DimensionMismatch(static_cast<std::ptrdiff_t>(n.size()),
                                                      static_cast<std::ptrdiff_t>(gap.size()));
  RateFit fit;
  std::size_t end = n.size();
  for (std::size_t i = 0; i < n.size(); ++i) {
    if (!(gap[i] > floor)) {
      end = i;
      fit.underflow = true;
      fit.underflow_n = n[i];
      break;
    }
  }
  if (end == 0) return std::nullopt;
  const std::size_t n_hi = n[end - 1];
  const std::size_t n_lo = std::max<std::size_t>(1, n_hi / 100);

  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  std::size_t m = 0;
  for (std::size_t i = 0; i < end; ++i) {
    if (n[i] < n_lo || n[i] == 0) continue;
    const double x = std::log(static_cast<double>(n[i]));
    const double y = std::log(gap[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++m;
  }
  if (m < 3) return std::nullopt;
  const double mx = sx / m;
  const double my = sy / m;
  const double var = sxx / m - mx * mx;
  if (!(var > 0)) return std::nullopt;
  const double slope = (sxy / m - mx * my) / var;
  fit.p = -slope;
  fit.C = std::exp(my - slope * mx);
  fit.n_lo = n_lo;
  fit.n_hi = n_hi;
  fit.points = m;
  return fit;
}

double gap_floor(double min_h, double error_bar) {
  return std::max(error_bar, roundoff_allowance(std::max(1.0, std::abs(min_h))));
}

std::optional<RateFit> fit_rate(const SolverTrace<double>& trace, double min_h, double error_bar) {
  std::vector<std::size_t> n;
  std::vector<double> gap;
  n.reserve(trace.records.size());
  gap.reserve(trace.records.size());
  for (const auto& r : trace.records) {
    n.push_back(r.n);
    gap.push_back(r.h_xn - min_h);
  }
  return fit_rate(n, gap, gap_floor(min_h, error_bar));
}

}  // namespace apg
