#include "apg/harness/schedule_table.hpp"

#include <cmath>
#include <ostream>

#include "apg/harness/runner.hpp"
#include "apg/io/trace_csv.hpp"
#include "apg/schedules/analysis.hpp"

namespace apg {

int cmd_schedule(const ScheduleSpec& spec, std::size_t n_max, std::ostream& out, std::ostream& err) {
  if (n_max == 0) {
    err << "schedule: --n must be at least 1\n";
    return kExitConfig;
  }
  std::vector<double> taus;
  try {
    taus = Schedule<double>::prefix(spec, n_max + 1);
  } catch (const AdmissibilityError& e) {
    err << "inadmissible schedule " << spec.describe() << ": " << e.what() << '\n';
    return kExitInadmissible;
  }
  const ScheduleDiagnostics d = analyze_prefix(taus);

  out << "# " << spec.describe() << '\n';
  out << "n\ttau_n\talpha_n\tn/tau_n\tdelta\tblowsup\n";
  for (std::size_t k = 0; k < n_max; ++k) {
    const std::size_t n = k + 1;
    out << n << '\t' << format_double(taus[k]) << '\t' << format_double(d.alpha[k]) << '\t'
        << format_double(static_cast<double>(n) / taus[k]) << '\t' << format_double(d.attouch_delta[k])
        << '\t' << format_double(d.blowsup_sum[k]) << '\n';
  }

  ScheduleCheckSpec check;
  check.name = "schedule";
  check.schedule = spec;
  check.n = n_max;
  int code = kExitOk;
  for (const auto& [name, v] : schedule_check_verdicts(check)) {
    out << "# " << name << ": " << to_string(v.status) << " (worst " << format_double(v.worst_residual)
        << ')';
    if (!v.note.empty()) out << ' ' << v.note;
    out << '\n';
    if (!v.ok()) code = kExitCheckFailed;
  }
  const Schedule<double> s(spec);
  out << "# tau_infinity: " << (s.tau_infinity() ? format_double(*s.tau_infinity()) : "+inf") << '\n';
  out << "# kappa bound: " << (s.kappa_bound() ? format_double(*s.kappa_bound()) : "+inf") << '\n';
  return code;
}

}  // namespace apg
