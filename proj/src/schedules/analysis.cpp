#include "apg/schedules/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace apg {

std::string to_string(ScheduleKind kind) {
  switch (kind) {
    case ScheduleKind::constant:
      return "constant";
    case ScheduleKind::classical:
      return "classical";
    case ScheduleKind::chambolle_dossal:
      return "chambolle_dossal";
    case ScheduleKind::aujol_dossal:
      return "aujol_dossal";
    case ScheduleKind::attouch_shifted:
      return "attouch_shifted";
    case ScheduleKind::custom:
      return "custom";
  }
  return "unknown";
}

ScheduleKind schedule_kind_from_string(const std::string& name) {
  for (ScheduleKind k : {ScheduleKind::constant, ScheduleKind::classical,
                         ScheduleKind::chambolle_dossal, ScheduleKind::aujol_dossal,
                         ScheduleKind::attouch_shifted, ScheduleKind::custom}) {
    if (to_string(k) == name) return k;
  }
  throw InvalidArgument("unknown schedule kind '" + name + "'");
}

std::string ScheduleSpec::describe() const {
  std::ostringstream os;
  os << to_string(kind);
  switch (kind) {
    case ScheduleKind::constant:
      os << "(tau=" << tau << ")";
      break;
    case ScheduleKind::classical:
      if (tau1 != 1.0) os << "(tau1=" << tau1 << ")";
      break;
    case ScheduleKind::chambolle_dossal:
    case ScheduleKind::attouch_shifted:
      os << "(rho=" << rho << ")";
      break;
    case ScheduleKind::aujol_dossal:
      os << "(a=" << a << ",d=" << d << ")";
      break;
    case ScheduleKind::custom:
      os << "(" << values.size() << " values)";
      break;
  }
  return os.str();
}

void validate_schedule_spec(const ScheduleSpec& spec) {
  switch (spec.kind) {
    case ScheduleKind::constant:
      if (!(spec.tau >= 1.0)) throw AdmissibilityError("constant schedule needs tau >= 1");
      break;
    case ScheduleKind::classical:
      if (!(spec.tau1 >= 1.0)) throw AdmissibilityError("classical schedule needs tau1 >= 1");
      break;
    case ScheduleKind::chambolle_dossal:
      if (!(spec.rho >= 2.0)) throw AdmissibilityError("chambolle_dossal needs rho >= 2");
      break;
    case ScheduleKind::aujol_dossal: {
      if (!(spec.a > 0.0)) throw AdmissibilityError("aujol_dossal needs a > 0");
      if (spec.d == 0.0) break;
      if (!(spec.d > 0.0 && spec.d <= 1.0))
        throw AdmissibilityError("aujol_dossal needs d = 0 or d in (0, 1]");
      const double gate = std::max(1.0, std::pow(2.0 * spec.d, 1.0 / spec.d));
      if (!(spec.a > gate)) {
        std::ostringstream os;
        os << "aujol_dossal needs a > max{1, (2d)^(1/d)} = " << gate << ", got a = " << spec.a;
        throw AdmissibilityError(os.str());
      }
      break;
    }
    case ScheduleKind::attouch_shifted:
      if (!(spec.rho > 1.0)) throw AdmissibilityError("attouch_shifted needs rho > 1");
      break;
    case ScheduleKind::custom:
      if (spec.values.empty()) throw AdmissibilityError("custom schedule needs values");
      break;
  }
}

AdmissibilityVerdict check_admissibility(const std::vector<double>& taus, double tol) {
  AdmissibilityVerdict v;
  if (taus.empty()) {
    v.admissible = false;
    v.first_violation = 0;
    v.reason = "empty prefix";
    return v;
  }
  if (!(taus[0] >= 1.0 - tol) || !std::isfinite(taus[0])) {
    v.admissible = false;
    v.first_violation = 0;
    v.reason = "tau_1 < 1";
    return v;
  }
  for (std::size_t i = 1; i < taus.size(); ++i) {
    const double prev = taus[i - 1];
    const double cur = taus[i];
    const double slack = tol * std::max(1.0, prev);
    std::ostringstream os;
    if (!std::isfinite(cur)) {
      os << "non-finite value at index " << i;
    } else if (cur < prev - slack) {
      os << "decrease at index " << i << ": " << cur << " < " << prev;
    } else if (cur > classical_successor(prev) + slack) {
      os << "value " << cur << " at index " << i << " exceeds (1 + sqrt(1 + 4 tau^2))/2 = "
         << classical_successor(prev);
    } else {
      continue;
    }
    v.admissible = false;
    v.first_violation = i;
    v.reason = os.str();
    return v;
  }
  return v;
}

ScheduleDiagnostics analyze_prefix(const std::vector<double>& taus) {
  ScheduleDiagnostics out;
  if (taus.size() < 2) return out;
  const std::size_t n = taus.size() - 1;
  out.alpha.reserve(n);
  out.sup_n_over_tau.reserve(n);
  out.attouch_delta.reserve(n);
  out.blowsup_sum.reserve(n);
  double sup_ratio = 0;
  double delta = 0;
  double sum = 0;
  for (std::size_t k = 0; k < n; ++k) {
    const double t = taus[k];
    const double t1 = taus[k + 1];
    out.alpha.push_back((t - 1.0) / t1);
    sup_ratio = std::max(sup_ratio, static_cast<double>(k + 1) / t);
    out.sup_n_over_tau.push_back(sup_ratio);
    delta = std::max(delta, (t1 - t) * (t1 + t) / t1);
    out.attouch_delta.push_back(delta);
    sum += 1.0 - (t / t1) * (t / t1);
    out.blowsup_sum.push_back(sum);
  }
  return out;
}

ScheduleInequalityReport check_schedule_inequalities(const std::vector<double>& taus,
                                                     double tol) {
  ScheduleInequalityReport r;
  const double diff_bound = (1.0 + std::sqrt(5.0)) / 4.0;
  if (taus.empty()) return r;
  r.tau1_ok = taus[0] >= 1.0;
  if (!r.tau1_ok) r.first_failure = 0;
  auto fail = [&](bool& flag, std::size_t i) {
    flag = false;
    if (!r.first_failure) r.first_failure = i;
  };
  for (std::size_t i = 1; i < taus.size(); ++i) {
    const double t = taus[i - 1];
    const double t1 = taus[i];
    const double lower = t - t1;
    const double upper = t1 - classical_successor(t);
    // Factored form keeps the rounding error at O(eps tau^2) instead of O(eps tau^4).
    const double rewrite = (t1 - t) * (t1 + t) - t1;
    const double difference = (t1 - t) - diff_bound;
    r.worst_lower = std::max(r.worst_lower, lower);
    r.worst_upper = std::max(r.worst_upper, upper);
    r.worst_rewrite = std::max(r.worst_rewrite, rewrite);
    r.worst_difference = std::max(r.worst_difference, difference);
    const double scale1 = std::max(1.0, t1);
    const double scale2 = std::max(1.0, t1 * t1);
    if (!within_tolerance(lower / scale1, tol, 1.0)) fail(r.bracket_ok, i);
    if (!within_tolerance(upper / scale1, tol, 1.0)) fail(r.bracket_ok, i);
    if (!within_tolerance(rewrite / scale2, tol, 1.0)) fail(r.rewrite_ok, i);
    if (!within_tolerance(difference, tol, scale1)) fail(r.difference_ok, i);
  }
  return r;
}

ClassicalBoundVerdict classical_lower_bound_check(std::size_t n_max) {
  ClassicalBoundVerdict v;
  Schedule<double> s(ScheduleSpec::classical());
  double tau = s.tau();
  for (std::size_t n = 1; n <= n_max; ++n) {
    if (n > 1) tau = s.next_tau();
    const double nn = static_cast<double>(n);
    if (tau < (nn + 1.0) / 2.0 && v.passed) {
      v.passed = false;
      v.first_violation = n;
    }
    v.sup_n_over_tau = std::max(v.sup_n_over_tau, nn / tau);
    v.tau_over_n_at_end = tau / nn;
  }
  if (v.sup_n_over_tau > 2.0) v.passed = false;
  return v;
}

std::vector<double> folklore_expansion_check(std::size_t n_max) {
  std::vector<double> taus = Schedule<double>::prefix(ScheduleSpec::classical(), n_max + 1);
  std::vector<double> r(n_max);
  for (std::size_t n = 1; n <= n_max; ++n) {
    const double nn = static_cast<double>(n);
    // n (alpha_n - 1) + 3 with alpha_n - 1 = -(1 + tau_{n+1} - tau_n) / tau_{n+1}.
    const double t = taus[n - 1];
    const double t1 = taus[n];
    r[n - 1] = -nn * (1.0 + (t1 - t)) / t1 + 3.0;
  }
  return r;
}

double attouch_condition_delta(const std::vector<double>& taus) {
  double delta = 0;
  for (std::size_t i = 1; i < taus.size(); ++i) {
    const double t = taus[i - 1];
    const double t1 = taus[i];
    delta = std::max(delta, (t1 - t) * (t1 + t) / t1);
  }
  return delta;
}

double blowsup_partial_sums(const std::vector<double>& taus) {
  double sum = 0;
  for (std::size_t i = 1; i < taus.size(); ++i) {
    const double q = taus[i - 1] / taus[i];
    sum += 1.0 - q * q;
  }
  return sum;
}

QuotientBoundsVerdict quotient_bounds_check(const std::vector<double>& taus,
                                            std::optional<double> tau_infinity) {
  QuotientBoundsVerdict v;
  auto record = [&](double violation, std::size_t n) {
    if (violation > v.worst_violation) v.worst_violation = violation;
    if (!within_tolerance(violation, kScheduleTol, 1.0) && v.passed) {
      v.passed = false;
      v.first_violation = n;
    }
  };
  for (std::size_t i = 0; i + 1 < taus.size(); ++i) {
    const double t = taus[i];
    const double t1 = taus[i + 1];
    const double alpha = (t - 1.0) / t1;
    const double upper = 1.0 - 1.0 / t1;
    const double lower = (t - 1.0) / (t + 1.0) - 1.0 / (t1 * (t + 1.0));
    record(alpha - upper, i + 1);
    record(lower - alpha, i + 1);
    if (alpha < 0.0 || alpha >= 1.0) record(1.0, i + 1);
    if (tau_infinity) record(alpha - (1.0 - 1.0 / *tau_infinity), i + 1);
  }
  if (tau_infinity && taus.size() >= 2) {
    const double t = taus[taus.size() - 2];
    const double t1 = taus.back();
    const double ti = *tau_infinity;
    if (std::abs(t1 - t) <= kScheduleTol * std::max(1.0, t1) &&
        std::abs(t1 - ti) <= kScheduleTol * std::max(1.0, ti)) {
      v.limit_checked = true;
      const double liminf_bound = (1.0 - 1.0 / ti) / (1.0 + 1.0 / ti) - 1.0 / (ti * (ti + 1.0));
      record(liminf_bound - (t - 1.0) / t1, taus.size() - 1);
    }
  }
  return v;
}

double chambolle_dossal_identity_residual(double rho, std::size_t n_max) {
  std::vector<double> taus =
      Schedule<double>::prefix(ScheduleSpec::chambolle_dossal(rho), n_max + 1);
  double worst = 0;
  for (std::size_t n = 1; n <= n_max; ++n) {
    const double t = taus[n - 1];
    const double t1 = taus[n];
    const double nn = static_cast<double>(n);
    const double lhs = (t - t1) * (t + t1) + t1;
    const double rhs = ((rho - 2.0) * nn + (rho - 1.0) * (rho - 1.0)) / (rho * rho);
    worst = std::max(worst, std::abs(lhs - rhs) / std::max(1.0, t1 * t1));
  }
  return worst;
}

}  // namespace apg
