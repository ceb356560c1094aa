#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "apg/core/problem.hpp"
#include "apg/schedules/schedule.hpp"
#include "apg/solvers/trace.hpp"

namespace apg {

inline constexpr int kConfigSchemaVersion = 1;

/// Where the Lyapunov/Fejer anchor comes from.
enum class AnchorPolicy {
  automatic,  ///< witness if the catalog has one, else oracle if Argmin is nonempty, else none
  witness,
  oracle,
  none
};

AnchorPolicy anchor_policy_from_string(const std::string& name);
std::string to_string(AnchorPolicy p);

/// One solver run of the matrix.
struct RunSpec {
  std::string name;
  /// Problem block as written, after seed resolution; also the oracle cache key.
  nlohmann::json problem;
  Algorithm algorithm{Algorithm::fista};
  ScheduleSpec schedule;
  std::size_t max_iters{1000};
  std::size_t record_every{1};
  std::optional<std::vector<double>> x0;
  AnchorPolicy anchor{AnchorPolicy::automatic};
  std::size_t oracle_budget{100000};
  std::vector<std::string> checks;
  std::optional<double> expect_rate;
  double liminf_threshold{-1e6};
  double liminf_tol{1e-2};
};

/// A schedule-only check: bracket, consequences, quotient bounds and attouch delta.
struct ScheduleCheckSpec {
  std::string name;
  ScheduleSpec schedule;
  std::size_t n{100000};
  std::optional<double> max_delta;
};

struct SuiteConfig {
  int schema_version{kConfigSchemaVersion};
  std::vector<RunSpec> runs;
  std::vector<ScheduleCheckSpec> schedule_checks;
  bool sequence_lemmas{false};
};

/// Parses a schedule block such as {"kind": "chambolle_dossal", "rho": 2}. Throws
/// ConfigError on shape errors; parameter ranges are checked by the Schedule itself.
ScheduleSpec parse_schedule(const nlohmann::json& j);
nlohmann::json schedule_to_json(const ScheduleSpec& s);

/// Throws ConfigError on malformed input and AdmissibilityError on an inadmissible schedule.
/// `seed_override` replaces every problem seed (the APG_SEED variable).
SuiteConfig parse_suite(const nlohmann::json& j, std::optional<std::uint64_t> seed_override = {});
SuiteConfig load_suite(const std::string& path, std::optional<std::uint64_t> seed_override = {});

/// Builds the composite problem named by a run's problem block.
CompositeProblem<double> build_problem(const nlohmann::json& problem);

}  // namespace apg
