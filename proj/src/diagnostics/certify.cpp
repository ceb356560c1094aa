#include "apg/diagnostics/certify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "apg/core/tolerance.hpp"
#include "apg/diagnostics/fit_rate.hpp"

namespace apg {

namespace {

using Record = IterationRecord<double>;

// Tracks the worst lhs - rhs and the first step that breaks the tolerance.
struct Ledger {
  double worst{-std::numeric_limits<double>::infinity()};
  std::optional<std::size_t> worst_n;
  std::optional<std::size_t> first_fail;
  std::size_t checked{0};

  void add(double violation, double magnitude, std::size_t n, double tol = kInequalityTol) {
    ++checked;
    if (violation > worst) {
      worst = violation;
      worst_n = n;
    }
    if (!within_tolerance(violation, tol, magnitude) && !first_fail) first_fail = n;
  }

  Verdict verdict(const std::string& empty_note) const {
    if (checked == 0) return Verdict::not_applicable(empty_note);
    Verdict v;
    v.status = first_fail ? Status::fail : Status::pass;
    v.worst_residual = worst;
    v.location_n = first_fail ? first_fail : worst_n;
    if (first_fail) v.note = "first violation at n = " + std::to_string(*first_fail);
    return v;
  }
};

template <typename F>
void for_consecutive(const Trace& t, F&& f) {
  for (std::size_t i = 1; i < t.records.size(); ++i) {
    const Record& a = t.records[i - 1];
    const Record& b = t.records[i];
    if (b.n == a.n + 1) f(a, b);
  }
}

double two_gamma(const Trace& t) { return 2.0 * t.gamma; }

bool is_mfista(const Trace& t) { return t.algorithm == Algorithm::mfista; }

std::size_t last_n(const Trace& t) { return t.records.empty() ? 0 : t.records.back().n; }

}  // namespace

Verdict check_key_inequality(const Trace& t) {
  Ledger l;
  for (const Record& r : t.records)
    if (r.key_residual) l.add(-*r.key_residual, r.key_magnitude, r.n);
  return l.verdict("no step with h(x_{n-1}) finite");
}

Verdict check_sigma_monotone(const Trace& t) {
  Ledger l;
  for_consecutive(t, [&](const Record& a, const Record& b) {
    l.add(b.sigma_n - a.sigma_n, std::abs(a.sigma_n) + std::abs(b.sigma_n), b.n);
  });
  return l.verdict("fewer than two consecutive records");
}

Verdict check_descent_ledger(const Trace& t) {
  if (is_mfista(t)) return Verdict::not_applicable("FISTA-energy ledger; MFISTA uses mfista_one_step");
  Ledger l;
  for_consecutive(t, [&](const Record& a, const Record& b) {
    const double lhs = (1.0 - a.alpha_n * a.alpha_n) * a.step_norm * a.step_norm / two_gamma(t);
    const double rhs = a.sigma_n - b.sigma_n;
    l.add(lhs - rhs, std::abs(a.sigma_n) + std::abs(b.sigma_n) + lhs, a.n);
  });
  return l.verdict("fewer than two consecutive records");
}

Verdict check_lyapunov(const Trace& t) {
  if (!t.has_anchor()) return Verdict::not_applicable("no anchor z configured");
  Ledger l;
  for_consecutive(t, [&](const Record& a, const Record& b) {
    if (!a.lyapunov_E || !b.lyapunov_E) return;
    l.add(*b.lyapunov_E - *a.lyapunov_E, a.lyapunov_magnitude + b.lyapunov_magnitude, b.n);
  });
  return l.verdict("fewer than two consecutive records");
}

Verdict check_mfista_h_monotone(const Trace& t) {
  if (!is_mfista(t)) return Verdict::not_applicable("MFISTA only");
  Ledger l;
  for_consecutive(t, [&](const Record& a, const Record& b) {
    l.add(b.h_xn - a.h_xn, std::abs(a.h_xn) + std::abs(b.h_xn), b.n);
  });
  return l.verdict("fewer than two consecutive records");
}

Verdict check_mfista_one_step(const Trace& t) {
  if (!is_mfista(t)) return Verdict::not_applicable("MFISTA only");
  Ledger l;
  for_consecutive(t, [&](const Record& a, const Record& b) {
    const double q = a.tau_n / a.tau_next;
    const double lhs = b.h_xn + b.candidate_step_norm * b.candidate_step_norm / two_gamma(t);
    const double rhs =
        a.h_xn + q * q * a.candidate_step_norm * a.candidate_step_norm / two_gamma(t);
    l.add(lhs - rhs, std::abs(lhs) + std::abs(rhs), b.n);
  });
  return l.verdict("fewer than two consecutive records");
}

Verdict check_fejer(const Trace& t, double accumulated_tol, double oscillation_tol) {
  if (!t.has_anchor()) return Verdict::not_applicable("no anchor z configured");
  if (is_mfista(t)) return Verdict::not_applicable("ledger is stated for FISTA iterates");
  const double m = *t.anchor_h;
  double excess = 0;
  double worst = -std::numeric_limits<double>::infinity();
  std::optional<std::size_t> worst_n;
  std::size_t checked = 0;
  for_consecutive(t, [&](const Record& a, const Record& b) {
    if (!a.u_norm || !b.u_norm) return;
    const double ua = *a.u_norm * *a.u_norm;
    const double ub = *b.u_norm * *b.u_norm;
    const double ta = a.tau_n * a.tau_n;
    const double tb = b.tau_n * b.tau_n;
    const double eps = two_gamma(t) * (ta * (a.h_xn - m) - tb * (b.h_xn - m));
    const double violation = ub - (ua + eps);
    const double magnitude =
        ua + ub + two_gamma(t) * (ta * (std::abs(a.h_xn) + std::abs(m)) +
                                  tb * (std::abs(b.h_xn) + std::abs(m)));
    excess += std::max(0.0, violation - roundoff_allowance(magnitude));
    if (violation > worst) {
      worst = violation;
      worst_n = b.n;
    }
    ++checked;
  });
  if (checked == 0) return Verdict::not_applicable("fewer than two consecutive records");

  // Spread of |u_n| over the last decade.
  const std::size_t n_end = last_n(t);
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (const Record& r : t.records) {
    if (r.n * 10 < n_end || !r.u_norm) continue;
    lo = std::min(lo, *r.u_norm);
    hi = std::max(hi, *r.u_norm);
  }
  const double spread = hi - lo;

  Verdict v;
  v.worst_residual = excess;
  v.location_n = worst_n;
  const bool ledger_ok = excess <= accumulated_tol;
  const bool settled = spread < oscillation_tol;
  v.status = ledger_ok && settled ? Status::pass : Status::fail;
  std::ostringstream os;
  os << "accumulated excess " << excess << ", worst step violation " << worst
     << ", last-decade spread of |z_n - z| " << spread;
  v.note = os.str();
  return v;
}

std::optional<double> beta_z(const Trace& t) {
  if (t.records.empty() || t.records.front().n != 1) return std::nullopt;
  return t.records.front().lyapunov_E;
}

double trace_kappa(const Trace& t) {
  if (t.kappa_bound) return *t.kappa_bound;
  double k = 0;
  for (const Record& r : t.records) k = std::max(k, static_cast<double>(r.n) / r.tau_n);
  return k;
}

Verdict certify_O_one_over_n2(const Trace& t, const std::optional<MinEstimate>& min_h) {
  if (t.argmin_nonempty && !*t.argmin_nonempty)
    return Verdict::not_applicable("Argmin h is empty; the bound needs a minimizer");
  if (!t.kappa_bound) return Verdict::not_applicable("sup n / tau_n is unbounded for this schedule");
  if (t.algorithm == Algorithm::ista) return Verdict::not_applicable("ISTA has no O(1/n^2) bound");
  if (!min_h) return Verdict::not_applicable("no reference minimum");
  const std::optional<double> bz = beta_z(t);
  if (!bz) return Verdict::not_applicable("no anchor z configured");
  const double k2 = *t.kappa_bound * *t.kappa_bound;
  double worst = std::numeric_limits<double>::infinity();
  std::optional<std::size_t> at;
  for (const Record& r : t.records) {
    const double nn = static_cast<double>(r.n);
    const double margin = *bz * k2 / (nn * nn) + 1e-9 - (r.h_xn - min_h->value);
    if (margin < worst) {
      worst = margin;
      at = r.n;
    }
  }
  Verdict v;
  v.status = margin_status(worst, min_h->error_bar);
  v.worst_residual = -worst;
  v.location_n = at;
  std::ostringstream os;
  os << "beta_z " << *bz << ", kappa " << *t.kappa_bound << ", worst margin " << worst
     << ", oracle error bar " << min_h->error_bar;
  v.note = os.str();
  return v;
}

std::vector<double> decade_maxima(const std::vector<std::size_t>& n,
                                  const std::vector<double>& values, double floor) {
  std::vector<double> out;
  for (std::size_t i = 0; i < n.size(); ++i) {
    if (n[i] == 0) continue;
    std::size_t d = 0;
    for (std::size_t k = n[i]; k >= 10; k /= 10) ++d;
    if (out.size() <= d) out.resize(d + 1, 0.0);
    const double v = values[i] > floor ? values[i] : 0.0;
    out[d] = std::max(out[d], v);
  }
  return out;
}

bool decade_maxima_vanishing(const std::vector<double>& maxima, std::size_t min_decades) {
  if (maxima.size() < min_decades) return false;
  // Longest trailing run of admissible pairs.
  std::size_t start = maxima.size() - 1;
  while (start > 0) {
    const double a = maxima[start - 1];
    const double b = maxima[start];
    const bool ok = (a > b) || (a == 0.0 && b == 0.0);
    if (!ok) break;
    --start;
  }
  const std::size_t window = maxima.size() - start;
  std::size_t positive = 0;
  for (std::size_t i = start; i < maxima.size(); ++i)
    if (maxima[i] > 0) ++positive;
  return window >= min_decades && positive >= 2;
}

BoundedTauVerdicts certify_bounded_tau_rates(const Trace& t, const std::optional<MinEstimate>& min_h,
                                             double minus_inf_threshold) {
  BoundedTauVerdicts out;
  if (!t.tau_infinity) {
    out.limits = Verdict::not_applicable("schedule is unbounded");
    out.rate_o_n = out.limits;
    out.summable_steps = out.limits;
    return out;
  }
  if (t.records.empty()) {
    out.limits = Verdict::not_applicable("empty trace");
    out.rate_o_n = out.limits;
    out.summable_steps = out.limits;
    return out;
  }

  // (a) sigma_N and h(x_N) differ by |dx_N|^2 / (2 gamma).
  const Record& last = t.records.back();
  out.limits.location_n = last.n;
  if (t.known_inf && t.known_inf->is_minus_infinity()) {
    // Both limits are -inf: require both sequences past the threshold.
    const double worst = std::max(last.sigma_n, last.h_xn) - minus_inf_threshold;
    out.limits.status = worst < 0 ? Status::pass : Status::fail;
    out.limits.worst_residual = worst;
    std::ostringstream os;
    os << "inf h = -inf: sigma_N = " << last.sigma_n << ", h(x_N) = " << last.h_xn << " against threshold "
       << minus_inf_threshold;
    out.limits.note = os.str();
  } else {
    const double diff = std::abs(last.sigma_n - last.h_xn);
    out.limits.status = diff <= 1e-8 ? Status::pass : Status::fail;
    out.limits.worst_residual = diff;
    out.limits.note = "|sigma_N - h(x_N)|";
  }

  const bool has_min = !(t.argmin_nonempty && !*t.argmin_nonempty) && min_h.has_value();
  if (!has_min) {
    out.rate_o_n = Verdict::not_applicable("Argmin h is empty or no reference minimum");
    out.summable_steps = out.rate_o_n;
    return out;
  }

  // (b) n (h(x_n) - min_h) -> 0 via decade maxima.
  std::vector<std::size_t> ns;
  std::vector<double> ngap;
  for (const Record& r : t.records) {
    ns.push_back(r.n);
    const double gap = r.h_xn - min_h->value;
    const bool resolved = gap > gap_floor(min_h->value, min_h->error_bar);
    ngap.push_back(resolved ? static_cast<double>(r.n) * gap : 0.0);
  }
  const std::vector<double> dmax = decade_maxima(ns, ngap, 0.0);
  out.rate_o_n.status = decade_maxima_vanishing(dmax) ? Status::pass : Status::fail;
  out.rate_o_n.worst_residual = dmax.empty() ? 0.0 : dmax.back();
  out.rate_o_n.location_n = last.n;
  {
    std::ostringstream os;
    os << "decade maxima of n*gap:";
    for (double d : dmax) os << ' ' << d;
    out.rate_o_n.note = os.str();
  }

  // (c) Cauchy tails over the last decade.
  bool consecutive = true;
  for (std::size_t i = 1; i < t.records.size(); ++i)
    if (t.records[i].n != t.records[i - 1].n + 1) consecutive = false;
  if (!consecutive || t.records.front().n != 1) {
    out.summable_steps.status = Status::inconclusive;
    out.summable_steps.note = "partial sums need every iteration recorded";
    return out;
  }
  double tail_sq = 0;
  double tail_nsq = 0;
  for (const Record& r : t.records) {
    if (r.n * 10 <= last.n) continue;
    const double s2 = r.step_norm * r.step_norm;
    tail_sq += s2;
    tail_nsq += static_cast<double>(r.n) * s2;
  }
  const double worst_tail = std::max(tail_sq, tail_nsq);
  out.summable_steps.status = worst_tail < 1e-8 ? Status::pass : Status::fail;
  out.summable_steps.worst_residual = worst_tail;
  out.summable_steps.location_n = last.n;
  std::ostringstream os;
  os << "last-decade tails: sum |dx|^2 = " << tail_sq << ", sum n|dx|^2 = " << tail_nsq;
  out.summable_steps.note = os.str();
  return out;
}

Verdict certify_scaled_gap_vanishing(const Trace& t, const std::optional<MinEstimate>& min_h,
                                     double factor) {
  if (t.argmin_nonempty && !*t.argmin_nonempty)
    return Verdict::not_applicable("Argmin h is empty");
  if (t.tau_infinity) return Verdict::not_applicable("schedule is bounded");
  if (!min_h) return Verdict::not_applicable("no reference minimum");
  if (t.records.empty()) return Verdict::not_applicable("empty trace");
  const std::size_t n_end = last_n(t);
  const double floor = gap_floor(min_h->value, min_h->error_bar);
  double first = 0;
  double last = 0;
  for (const Record& r : t.records) {
    const double gap = r.h_xn - min_h->value;
    const double scaled = gap > floor ? r.tau_n * r.tau_n * gap : 0.0;
    if (r.n < 10) first = std::max(first, scaled);
    if (r.n * 10 > n_end) last = std::max(last, scaled);
  }
  Verdict v;
  v.status = (first > 0 && last < first / factor) ? Status::pass : Status::fail;
  v.worst_residual = first > 0 ? last / first : last;
  v.location_n = n_end;
  std::ostringstream os;
  os << "first-decade max " << first << ", last-decade max " << last;
  v.note = os.str();
  return v;
}

Verdict certify_divergence(const Trace& t, double ratio) {
  if (!t.argmin_nonempty || *t.argmin_nonempty)
    return Verdict::not_applicable("problem is not flagged as having empty Argmin");
  if (t.records.size() < 2) return Verdict::not_applicable("fewer than two records");
  const std::size_t n_first = t.records.front().n;
  const std::size_t n_end = last_n(t);
  const double mid = std::sqrt(static_cast<double>(n_first) * static_cast<double>(n_end));

  const Record* at_mid = &t.records.front();
  for (const Record& r : t.records) {
    if (static_cast<double>(r.n) <= mid) at_mid = &r;
  }
  std::optional<std::size_t> last_decrease;
  double prev = -1;
  for (const Record& r : t.records) {
    if (r.n * 10 >= n_end && prev >= 0 && r.x_norm < prev) last_decrease = r.n;
    prev = r.x_norm;
  }
  const double final_norm = t.records.back().x_norm;
  const double growth = at_mid->x_norm > 0 ? final_norm / at_mid->x_norm
                                           : std::numeric_limits<double>::infinity();
  Verdict v;
  v.status = (!last_decrease && growth > ratio) || t.diverging ? Status::pass : Status::fail;
  v.worst_residual = growth;
  v.location_n = last_decrease ? last_decrease : std::optional<std::size_t>(at_mid->n);
  std::ostringstream os;
  os << "|x_N| / |x_m| = " << growth << " with m = " << at_mid->n;
  if (last_decrease) os << "; |x_n| decreased at n = " << *last_decrease;
  if (t.diverging) os << "; run truncated as diverging";
  v.note = os.str();
  return v;
}

Verdict certify_liminf_inf(const Trace& t, const ExtendedReal<double>& lower_bound, double tol,
                           double threshold) {
  if (t.records.empty()) return Verdict::not_applicable("empty trace");
  double run_min = std::numeric_limits<double>::infinity();
  std::size_t at = 0;
  for (const Record& r : t.records) {
    if (r.h_xn < run_min) {
      run_min = r.h_xn;
      at = r.n;
    }
  }
  Verdict v;
  v.location_n = at;
  std::ostringstream os;
  if (lower_bound.is_minus_infinity()) {
    v.status = run_min < threshold ? Status::pass : Status::fail;
    v.worst_residual = run_min - threshold;
    os << "running min " << run_min << " against threshold " << threshold;
  } else {
    const double gap = run_min - lower_bound.value();
    v.status = gap <= tol ? Status::pass : Status::fail;
    v.worst_residual = gap - tol;
    os << "running min - bound = " << gap << ", tolerance " << tol;
  }
  v.note = os.str();
  return v;
}

Verdict probe_full_limit(const Trace& t, const ExtendedReal<double>& lower_bound, double tol,
                         double threshold) {
  Verdict v;
  v.exploratory = true;
  if (t.records.empty()) {
    v.note = "empty trace";
    return v;
  }
  const std::size_t n_end = last_n(t);
  double worst = -std::numeric_limits<double>::infinity();
  std::size_t at = n_end;
  for (const Record& r : t.records) {
    if (r.n * 10 < n_end) continue;
    if (r.h_xn > worst) {
      worst = r.h_xn;
      at = r.n;
    }
  }
  v.location_n = at;
  if (lower_bound.is_minus_infinity()) {
    v.status = worst < threshold ? Status::pass : Status::fail;
    v.worst_residual = worst - threshold;
  } else {
    v.status = worst - lower_bound.value() <= tol ? Status::pass : Status::fail;
    v.worst_residual = worst - lower_bound.value() - tol;
  }
  v.note = "exploratory: last-decade max of h(x_n) against the bound";
  return v;
}

Verdict check_bounded_iterates(const Trace& t, double rel_tol) {
  if (!t.argmin_nonempty || !*t.argmin_nonempty)
    return Verdict::not_applicable("Argmin h not known to be nonempty");
  if (t.records.size() < 4) return Verdict::not_applicable("trace too short");
  const std::size_t half = last_n(t) / 2;
  double scaled_half = 0, scaled_all = 0, norm_half = 0, norm_all = 0;
  for (const Record& r : t.records) {
    const double s = r.tau_n * r.step_norm;
    scaled_all = std::max(scaled_all, s);
    norm_all = std::max(norm_all, r.x_norm);
    if (r.n <= half) {
      scaled_half = std::max(scaled_half, s);
      norm_half = std::max(norm_half, r.x_norm);
    }
  }
  const double g1 = scaled_all - scaled_half * (1.0 + rel_tol);
  const double g2 = norm_all - norm_half * (1.0 + rel_tol);
  Verdict v;
  const bool finite = std::isfinite(scaled_all) && std::isfinite(norm_all);
  v.status = finite && g1 <= 1e-12 && g2 <= 1e-12 ? Status::pass : Status::fail;
  v.worst_residual = std::max(g1, g2);
  v.location_n = half;
  std::ostringstream os;
  os << "max tau_n|dx_n|: " << scaled_half << " -> " << scaled_all << ", max |x_n|: " << norm_half
     << " -> " << norm_all;
  v.note = os.str();
  return v;
}

Verdict check_fitted_rate(const Trace& t, const std::optional<MinEstimate>& min_h, double expect) {
  if (!min_h) return Verdict::not_applicable("no reference minimum");
  const std::optional<RateFit> fit = fit_rate(t, min_h->value, min_h->error_bar);
  if (!fit) {
    Verdict v;
    v.status = Status::inconclusive;
    v.note = "fewer than three resolved gaps";
    return v;
  }
  Verdict v;
  v.status = fit->p >= expect ? Status::pass : Status::fail;
  v.worst_residual = expect - fit->p;
  v.location_n = fit->n_hi;
  std::ostringstream os;
  os << "p = " << fit->p << " over n in [" << fit->n_lo << ", " << fit->n_hi << "]";
  if (fit->underflow) os << ", gap underflow at n = " << *fit->underflow_n;
  v.note = os.str();
  return v;
}

}  // namespace apg
