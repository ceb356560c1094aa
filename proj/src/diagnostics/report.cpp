#include "apg/diagnostics/report.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <sstream>

namespace apg {

namespace {

// Largest (tau_{n+1}^2 - tau_n^2) / tau_{n+1} over the recorded steps.
double recorded_attouch_delta(const Trace& t) {
  double delta = 0;
  for (const auto& r : t.records)
    delta = std::max(delta, (r.tau_next - r.tau_n) * (r.tau_next + r.tau_n) / r.tau_next);
  return delta;
}

nlohmann::ordered_json number_or_null(double x) {
  if (std::isfinite(x)) return x;
  return nullptr;
}

}  // namespace

const std::vector<std::string>& check_names() {
  static const std::vector<std::string> names = {
      "keyineq",          "sigma_monotone",   "descent_ledger",     "lyapunov",
      "mfista_h_monotone", "mfista_one_step", "fejer",              "rate_O_n2",
      "bounded_tau_limits", "rate_o_n",       "summable_steps",     "scaled_gap_vanishing",
      "divergence_xnorm", "liminf_inf",       "full_limit",         "bounded_iterates",
      "fitted_rate"};
  return names;
}

bool DiagnosticsReport::ok() const {
  return std::all_of(verdicts.begin(), verdicts.end(), [](const auto& kv) { return kv.second.ok(); });
}

const Verdict* DiagnosticsReport::find(const std::string& name) const {
  for (const auto& [k, v] : verdicts)
    if (k == name) return &v;
  return nullptr;
}

std::string DiagnosticsReport::to_text() const {
  std::ostringstream os;
  os << std::setprecision(6);
  for (const auto& [name, v] : verdicts) {
    os << std::left << std::setw(22) << name << std::setw(16) << to_string(v.status);
    if (v.exploratory) os << "[exploratory] ";
    os << "worst " << v.worst_residual;
    if (v.location_n) os << " at n=" << *v.location_n;
    if (!v.note.empty()) os << "  (" << v.note << ")";
    os << '\n';
  }
  os << "kappa " << kappa;
  if (beta_z) os << ", beta_z " << *beta_z;
  if (min_h) os << ", min_h " << std::setprecision(17) << min_h->value << " +- " << min_h->error_bar;
  if (fitted_rate) os << std::setprecision(6) << ", fitted p " << fitted_rate->p << " C " << fitted_rate->C;
  os << '\n';
  return os.str();
}

nlohmann::ordered_json DiagnosticsReport::to_json() const {
  nlohmann::ordered_json j;
  nlohmann::ordered_json checks = nlohmann::ordered_json::object();
  for (const auto& [name, v] : verdicts) {
    nlohmann::ordered_json c;
    c["status"] = to_string(v.status);
    c["worst_residual"] = number_or_null(v.worst_residual);
    c["location_n"] = v.location_n ? nlohmann::ordered_json(*v.location_n) : nullptr;
    if (v.exploratory) c["exploratory"] = true;
    if (!v.note.empty()) c["note"] = v.note;
    checks[name] = std::move(c);
  }
  j["verdicts"] = std::move(checks);
  if (fitted_rate) {
    j["fitted_rate"] = {{"p", fitted_rate->p},
                        {"C", fitted_rate->C},
                        {"n_lo", fitted_rate->n_lo},
                        {"n_hi", fitted_rate->n_hi},
                        {"underflow", fitted_rate->underflow}};
  } else {
    j["fitted_rate"] = nullptr;
  }
  j["kappa"] = number_or_null(kappa);
  j["beta_z"] = beta_z ? number_or_null(*beta_z) : nullptr;
  if (min_h) {
    j["min_h"] = min_h->value;
    j["min_h_error_bar"] = min_h->error_bar;
  } else {
    j["min_h"] = nullptr;
  }
  j["ok"] = ok();
  return j;
}

DiagnosticsReport build_report(const Trace& t, const ReportOptions& o) {
  DiagnosticsReport rep;
  rep.kappa = trace_kappa(t);
  rep.beta_z = beta_z(t);
  rep.min_h = o.min_h;
  if (o.min_h) rep.fitted_rate = fit_rate(t, o.min_h->value, o.min_h->error_bar);

  auto wanted = [&](const std::string& name) {
    return o.checks.empty() || std::find(o.checks.begin(), o.checks.end(), name) != o.checks.end();
  };
  auto add = [&](const std::string& name, Verdict v) {
    if (wanted(name)) rep.verdicts.emplace_back(name, std::move(v));
  };

  if (wanted("keyineq")) add("keyineq", check_key_inequality(t));
  if (wanted("sigma_monotone")) add("sigma_monotone", check_sigma_monotone(t));
  if (wanted("descent_ledger")) add("descent_ledger", check_descent_ledger(t));
  if (wanted("lyapunov")) add("lyapunov", check_lyapunov(t));
  if (wanted("mfista_h_monotone")) add("mfista_h_monotone", check_mfista_h_monotone(t));
  if (wanted("mfista_one_step")) add("mfista_one_step", check_mfista_one_step(t));
  if (wanted("fejer")) add("fejer", check_fejer(t));
  if (wanted("rate_O_n2")) add("rate_O_n2", certify_O_one_over_n2(t, o.min_h));

  if (wanted("bounded_tau_limits") || wanted("rate_o_n") || wanted("summable_steps")) {
    BoundedTauVerdicts b = certify_bounded_tau_rates(t, o.min_h, o.liminf_threshold);
    add("bounded_tau_limits", std::move(b.limits));
    add("rate_o_n", std::move(b.rate_o_n));
    add("summable_steps", std::move(b.summable_steps));
  }

  if (wanted("scaled_gap_vanishing")) {
    const double delta = recorded_attouch_delta(t);
    if (t.algorithm != Algorithm::mfista) {
      add("scaled_gap_vanishing", Verdict::not_applicable("stated for MFISTA"));
    } else if (!(delta < 1.0)) {
      add("scaled_gap_vanishing",
          Verdict::not_applicable("schedule does not satisfy tau_{n+1}^2 - tau_n^2 <= delta tau_{n+1}, delta < 1"));
    } else {
      add("scaled_gap_vanishing", certify_scaled_gap_vanishing(t, o.min_h));
    }
  }

  if (wanted("divergence_xnorm")) add("divergence_xnorm", certify_divergence(t));

  if (wanted("liminf_inf") || wanted("full_limit")) {
    std::optional<ExtendedReal<double>> bound = o.lower_bound;
    if (!bound) bound = t.known_inf;
    if (!bound && o.min_h) bound = ExtendedReal<double>(o.min_h->value);
    if (!bound) {
      add("liminf_inf", Verdict::not_applicable("no lower bound on inf h"));
      add("full_limit", [] {
        Verdict v = Verdict::not_applicable("no lower bound on inf h");
        v.exploratory = true;
        return v;
      }());
    } else {
      // Certified rate when available, else the configured tolerance.
      double tol = o.liminf_tol;
      const bool has_min = !(t.argmin_nonempty && !*t.argmin_nonempty);
      if (has_min && rep.beta_z && t.kappa_bound && t.algorithm != Algorithm::ista &&
          !t.records.empty()) {
        const double n = static_cast<double>(t.records.back().n);
        tol = *rep.beta_z * *t.kappa_bound * *t.kappa_bound / (n * n) + 1e-9;
      }
      if (o.min_h) tol += o.min_h->error_bar;
      add("liminf_inf", certify_liminf_inf(t, *bound, tol, o.liminf_threshold));
      add("full_limit", probe_full_limit(t, *bound, tol, o.liminf_threshold));
    }
  }

  if (wanted("bounded_iterates")) add("bounded_iterates", check_bounded_iterates(t));
  if (o.expect_rate && wanted("fitted_rate"))
    add("fitted_rate", check_fitted_rate(t, o.min_h, *o.expect_rate));
  return rep;
}

}  // namespace apg
