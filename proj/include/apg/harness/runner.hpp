#pragma once

#include <cstdint>
#include <future>
#include <iosfwd>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "apg/diagnostics/oracle.hpp"
#include "apg/diagnostics/report.hpp"
#include "apg/harness/config.hpp"

namespace apg {

/// Process exit codes of the command-line tool.
enum ExitCode : int {
  kExitOk = 0,
  kExitCheckFailed = 1,
  kExitConfig = 2,
  kExitInadmissible = 3,
  kExitOracle = 4,
};

/// Reference minima shared across runs of one suite, keyed by problem block and budget.
/// Each entry is computed once; concurrent requests wait for the first.
class OracleCache {
 public:
  ReferenceMin<double> get(const nlohmann::json& problem_block, std::size_t budget,
                           const CompositeProblem<double>& problem);

 private:
  std::mutex mutex_;
  std::map<std::string, std::shared_future<ReferenceMin<double>>> entries_;
};

struct RunResult {
  SolverTrace<double> trace;
  DiagnosticsReport report;
  /// "witness", "oracle" or "none".
  std::string anchor_source;
};

/// Solves and diagnoses one run without touching the filesystem.
RunResult execute_run(const RunSpec& spec, OracleCache& cache);

/// Report JSON written next to each trace.
nlohmann::ordered_json run_json(const RunSpec& spec, const RunResult& result);

/// Verdicts of a schedule-only check.
std::vector<std::pair<std::string, Verdict>> schedule_check_verdicts(const ScheduleCheckSpec& spec);

struct RunOutcome {
  std::string name;
  int exit_code{kExitOk};
  std::vector<std::string> failed_checks;
  std::string error;
};

/// Executes every run with at most `jobs` workers (0 means hardware concurrency), writes
/// <name>.csv and <name>.json into `out_dir`, and reduces the outcomes in config order.
std::vector<RunOutcome> run_suite(const SuiteConfig& cfg, const std::string& out_dir, unsigned jobs);

/// `apg run`: exit 0 iff every non-exploratory verdict is pass or not-applicable.
int cmd_run(const std::string& config_path, unsigned jobs, const std::string& out_dir,
            std::ostream& out, std::ostream& err);

/// Seed override from APG_SEED, if set and numeric.
std::optional<std::uint64_t> seed_from_environment();

}  // namespace apg
