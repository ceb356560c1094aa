#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "apg/core/errors.hpp"
#include "apg/core/tolerance.hpp"

namespace apg {

enum class ScheduleKind { constant, classical, chambolle_dossal, aujol_dossal, attouch_shifted, custom };

std::string to_string(ScheduleKind kind);
ScheduleKind schedule_kind_from_string(const std::string& name);

/// Parameters of a momentum schedule, as read from a run config.
struct ScheduleSpec {
  ScheduleKind kind{ScheduleKind::classical};
  double tau{1.0};   ///< constant value (constant)
  double tau1{1.0};  ///< starting value (classical)
  double rho{2.0};   ///< chambolle_dossal, attouch_shifted
  double a{5.0};     ///< aujol_dossal
  double d{0.5};     ///< aujol_dossal
  std::vector<double> values;  ///< custom

  static ScheduleSpec constant(double tau_bar) {
    ScheduleSpec s;
    s.kind = ScheduleKind::constant;
    s.tau = tau_bar;
    return s;
  }
  static ScheduleSpec classical(double tau1 = 1.0) {
    ScheduleSpec s;
    s.kind = ScheduleKind::classical;
    s.tau1 = tau1;
    return s;
  }
  static ScheduleSpec chambolle_dossal(double rho) {
    ScheduleSpec s;
    s.kind = ScheduleKind::chambolle_dossal;
    s.rho = rho;
    return s;
  }
  static ScheduleSpec aujol_dossal(double a, double d) {
    ScheduleSpec s;
    s.kind = ScheduleKind::aujol_dossal;
    s.a = a;
    s.d = d;
    return s;
  }
  static ScheduleSpec attouch_shifted(double rho) {
    ScheduleSpec s;
    s.kind = ScheduleKind::attouch_shifted;
    s.rho = rho;
    return s;
  }
  static ScheduleSpec custom(std::vector<double> values) {
    ScheduleSpec s;
    s.kind = ScheduleKind::custom;
    s.values = std::move(values);
    return s;
  }

  /// Short label such as "chambolle_dossal(rho=2)".
  std::string describe() const;
};

/// Upper end of the admissible bracket, (1 + sqrt(1 + 4 tau^2)) / 2.
template <typename Scalar>
Scalar classical_successor(Scalar tau) {
  using std::sqrt;
  return (Scalar(1) + sqrt(Scalar(1) + Scalar(4) * tau * tau)) / Scalar(2);
}

/// Result of checking a tau prefix against tau_1 >= 1 and the bracket.
struct AdmissibilityVerdict {
  bool admissible{true};
  std::optional<std::size_t> first_violation;  ///< zero-based index
  std::string reason;
};

AdmissibilityVerdict check_admissibility(const std::vector<double>& taus,
                                         double tol = kScheduleTol);

/// Throws AdmissibilityError when the parameters fall outside their family's range.
void validate_schedule_spec(const ScheduleSpec& spec);

/// Single-owner iterator over (tau_n). Copies are independent.
template <typename Scalar>
class Schedule {
 public:
  explicit Schedule(ScheduleSpec spec) : spec_(std::move(spec)) {
    validate_schedule_spec(spec_);
    if (spec_.kind == ScheduleKind::custom) {
      AdmissibilityVerdict v = check_admissibility(spec_.values);
      if (!v.admissible) {
        throw AdmissibilityError("custom schedule: " + v.reason,
                                 static_cast<std::ptrdiff_t>(*v.first_violation));
      }
    }
    tau_ = formula(1);
    base_ = Scalar(1);
  }

  const ScheduleSpec& spec() const noexcept { return spec_; }
  std::size_t index() const noexcept { return n_; }
  Scalar tau() const noexcept { return tau_; }

  /// Advances n by one and returns tau_{n+1}.
  Scalar next_tau() {
    ++n_;
    switch (spec_.kind) {
      case ScheduleKind::classical:
        tau_ = classical_successor(tau_);
        break;
      case ScheduleKind::attouch_shifted:
        base_ = classical_successor(base_);
        tau_ = (base_ + Scalar(spec_.rho) - Scalar(1)) / Scalar(spec_.rho);
        break;
      default:
        tau_ = formula(n_);
        break;
    }
    return tau_;
  }

  /// sup_n tau_n when provably infinite is reported as nullopt.
  std::optional<Scalar> tau_infinity() const {
    switch (spec_.kind) {
      case ScheduleKind::classical:
      case ScheduleKind::chambolle_dossal:
      case ScheduleKind::attouch_shifted:
        return std::nullopt;
      case ScheduleKind::aujol_dossal:
        if (spec_.d > 0) return std::nullopt;
        return Scalar(1);
      case ScheduleKind::constant:
        return Scalar(spec_.tau);
      case ScheduleKind::custom:
        return Scalar(spec_.values.back());
    }
    return std::nullopt;
  }

  bool bounded() const { return tau_infinity().has_value(); }

  /// Analytic bound on sup_n n / tau_n, or nullopt when that supremum is infinite.
  std::optional<Scalar> kappa_bound() const {
    switch (spec_.kind) {
      case ScheduleKind::classical:
        // tau_{n+1} >= tau_n + 1/2 gives tau_n >= (n + 1) / 2.
        return Scalar(2);
      case ScheduleKind::chambolle_dossal:
        return Scalar(spec_.rho);
      case ScheduleKind::attouch_shifted:
        // (tau_n + rho - 1) / rho >= ((n + 1)/2 + rho - 1) / rho >= n / (2 rho).
        return Scalar(2 * spec_.rho);
      case ScheduleKind::aujol_dossal:
        if (spec_.d == 1.0) return Scalar(spec_.a);
        return std::nullopt;
      default:
        return std::nullopt;
    }
  }

  /// tau_1, ..., tau_count of a fresh schedule.
  static std::vector<Scalar> prefix(const ScheduleSpec& spec, std::size_t count) {
    Schedule s(spec);
    std::vector<Scalar> out;
    out.reserve(count);
    if (count == 0) return out;
    out.push_back(s.tau());
    while (out.size() < count) out.push_back(s.next_tau());
    return out;
  }

 private:
  // Closed-form families indexed from n = 1.
  Scalar formula(std::size_t n) const {
    using std::pow;
    const Scalar nn = Scalar(n);
    switch (spec_.kind) {
      case ScheduleKind::constant:
        return Scalar(spec_.tau);
      case ScheduleKind::classical:
        return Scalar(spec_.tau1);
      case ScheduleKind::chambolle_dossal:
        return (nn + Scalar(spec_.rho) - Scalar(1)) / Scalar(spec_.rho);
      case ScheduleKind::aujol_dossal:
        return pow((nn + Scalar(spec_.a) - Scalar(1)) / Scalar(spec_.a), Scalar(spec_.d));
      case ScheduleKind::attouch_shifted:
        return Scalar(1);
      case ScheduleKind::custom: {
        // Past the end the last value repeats, which stays admissible.
        const std::size_t i = std::min(n, spec_.values.size()) - 1;
        return Scalar(spec_.values[i]);
      }
    }
    return Scalar(1);
  }

  ScheduleSpec spec_;
  std::size_t n_{1};
  Scalar tau_{1};
  Scalar base_{1};
};

}  // namespace apg
