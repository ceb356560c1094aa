#pragma once

#include <cstddef>
#include <iosfwd>

#include "apg/schedules/schedule.hpp"

namespace apg {

/// `apg schedule`: prints n, tau_n, alpha_n, n/tau_n, running attouch delta and the blow-up
/// partial sum for n = 1..n_max, followed by the admissibility and asymptotic checks.
/// Returns 3 for parameters outside the family's range, 1 when a check fails, else 0.
int cmd_schedule(const ScheduleSpec& spec, std::size_t n_max, std::ostream& out, std::ostream& err);

}  // namespace apg
