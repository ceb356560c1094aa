#pragma once

#include <cmath>
#include <limits>

namespace apg {

/// Absolute slack granted to every monitored inequality.
inline constexpr double kInequalityTol = 1e-10;

/// Relative slack on schedule bracket checks.
inline constexpr double kScheduleTol = 1e-12;

/// Rounding allowance for an inequality whose terms have total magnitude `magnitude`.
/// Terms scaled by tau_n^2 reach 1e8 and beyond, where a fixed absolute slack sits
/// below one ulp.
template <typename Scalar>
Scalar roundoff_allowance(Scalar magnitude) {
  using std::abs;
  return Scalar(64) * std::numeric_limits<Scalar>::epsilon() * abs(magnitude);
}

/// True when `violation` (lhs - rhs of an inequality lhs <= rhs) is within `tol` plus the
/// rounding allowance for terms of size `magnitude`.
template <typename Scalar>
bool within_tolerance(Scalar violation, Scalar tol, Scalar magnitude) {
  return violation <= tol + roundoff_allowance(magnitude);
}

}  // namespace apg
