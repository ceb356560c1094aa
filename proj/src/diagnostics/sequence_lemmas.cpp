#include "apg/diagnostics/sequence_lemmas.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "apg/schedules/analysis.hpp"

namespace apg {

namespace {

std::size_t decade_of(std::size_t n) {
  std::size_t d = 0;
  for (; n >= 10; n /= 10) ++d;
  return d;
}

// Compares the last two complete decade totals of a nonnegative series.
bool settles(const std::vector<double>& decade_totals, double ratio) {
  if (decade_totals.size() < 2) return false;
  const double prev = decade_totals[decade_totals.size() - 2];
  const double last = decade_totals.back();
  return last <= ratio * prev;
}

}  // namespace

SequenceLemmaEvidence sequence_lemma_evidence(const std::string& name,
                                              const std::function<double(double)>& alpha,
                                              std::size_t n_max, double ratio) {
  SequenceLemmaEvidence e;
  e.name = name;
  // Only complete decades [10^j, 10^{j+1}) enter the comparisons.
  std::size_t top = 1;
  while (top * 10 <= n_max) top *= 10;
  std::vector<double> sum_inc(decade_of(top), 0.0);
  std::vector<double> diff_inc(decade_of(top), 0.0);
  std::vector<double> n_alpha_max(decade_of(top), 0.0);

  double a = alpha(2.0);
  for (std::size_t n = 2; n < top; ++n) {
    const double a_next = alpha(static_cast<double>(n + 1));
    const double nn = static_cast<double>(n);
    const std::size_t d = decade_of(n);
    sum_inc[d] += a;
    diff_inc[d] += nn * (a - a_next);
    n_alpha_max[d] = std::max(n_alpha_max[d], nn * a);
    e.partial_sum += a;
    e.weighted_diff_sum += nn * (a - a_next);
    e.last_n_alpha = nn * a;
    a = a_next;
  }
  e.summable = settles(sum_inc, ratio);
  e.weighted_diff_summable = settles(diff_inc, ratio);
  e.n_alpha_vanishes = settles(n_alpha_max, ratio);
  return e;
}

std::vector<std::pair<std::string, Verdict>> sequence_lemma_checks(const ScheduleSpec& schedule,
                                                                   std::size_t n_max,
                                                                   std::size_t blowsup_prefix,
                                                                   double blowsup_bound) {
  std::vector<std::pair<std::string, Verdict>> out;
  const std::vector<std::pair<std::string, std::function<double(double)>>> samples = {
      {"seq_inv_n2", [](double n) { return 1.0 / (n * n); }},
      {"seq_inv_n", [](double n) { return 1.0 / n; }},
      {"seq_inv_n_log2", [](double n) { return 1.0 / (n * std::log(n) * std::log(n)); }},
  };
  for (const auto& [name, fn] : samples) {
    const SequenceLemmaEvidence e = sequence_lemma_evidence(name, fn, n_max);
    Verdict v;
    v.status = e.consistent() ? Status::pass : Status::fail;
    v.worst_residual = e.last_n_alpha;
    v.location_n = n_max;
    std::ostringstream os;
    os << "summable " << e.summable << ", n*alpha -> 0 " << e.n_alpha_vanishes
       << ", sum n(alpha_n - alpha_{n+1}) finite " << e.weighted_diff_summable;
    v.note = os.str();
    out.emplace_back(name, std::move(v));
  }

  const std::vector<double> taus = Schedule<double>::prefix(schedule, blowsup_prefix);
  const double s = blowsup_partial_sums(taus);
  Verdict v;
  const bool unbounded = !Schedule<double>(schedule).bounded();
  if (!unbounded) {
    v = Verdict::not_applicable("schedule is bounded");
  } else {
    v.status = s > blowsup_bound ? Status::pass : Status::fail;
  }
  v.worst_residual = s;
  v.location_n = blowsup_prefix;
  v.note = "sum (1 - tau_k^2 / tau_{k+1}^2) = " + std::to_string(s);
  out.emplace_back("blowsup_sum", std::move(v));
  return out;
}

}  // namespace apg
