#include "apg/harness/runner.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <thread>

#include "apg/diagnostics/sequence_lemmas.hpp"
#include "apg/io/trace_csv.hpp"
#include "apg/schedules/analysis.hpp"

namespace apg {

using nlohmann::json;
using nlohmann::ordered_json;
namespace fs = std::filesystem;

ReferenceMin<double> OracleCache::get(const json& problem_block, std::size_t budget,
                                      const CompositeProblem<double>& problem) {
  const std::string key = problem_block.dump() + "#" + std::to_string(budget);
  std::shared_future<ReferenceMin<double>> f;
  std::promise<ReferenceMin<double>> mine;
  bool owner = false;
  {
    std::lock_guard<std::mutex> lock(mutex_);
    auto it = entries_.find(key);
    if (it == entries_.end()) {
      f = mine.get_future().share();
      entries_.emplace(key, f);
      owner = true;
    } else {
      f = it->second;
    }
  }
  if (owner) {
    try {
      mine.set_value(reference_min(problem, budget));
    } catch (...) {
      mine.set_exception(std::current_exception());
    }
  }
  return f.get();
}

RunResult execute_run(const RunSpec& spec, OracleCache& cache) {
  const CompositeProblem<double> problem = build_problem(spec.problem);
  const ProblemInfo<double>& info = problem.info();

  SolverConfig<double> cfg;
  cfg.algorithm = spec.algorithm;
  cfg.schedule = spec.schedule;
  cfg.max_iters = spec.max_iters;
  cfg.record_every = spec.record_every;
  if (spec.x0) {
    Point<double> x0(static_cast<Eigen::Index>(spec.x0->size()));
    for (std::size_t i = 0; i < spec.x0->size(); ++i) x0(static_cast<Eigen::Index>(i)) = (*spec.x0)[i];
    cfg.x0 = std::move(x0);
  }

  RunResult result;
  ReportOptions opts;
  result.anchor_source = "none";
  const bool has_witness = info.witness && info.known_min;
  const bool minimizer_known = info.known_argmin_nonempty.value_or(false);
  switch (spec.anchor) {
    case AnchorPolicy::witness:
      if (!has_witness) throw ConfigError(spec.name + ": anchor \"witness\" but the catalog has none");
      [[fallthrough]];
    case AnchorPolicy::automatic:
      if (has_witness) {
        cfg.anchor = *info.witness;
        opts.min_h = MinEstimate{*info.known_min, 0.0};
        result.anchor_source = "witness";
        break;
      }
      if (!minimizer_known) break;
      [[fallthrough]];
    case AnchorPolicy::oracle: {
      if (info.known_argmin_nonempty && !*info.known_argmin_nonempty)
        throw ConfigError(spec.name + ": anchor \"oracle\" on a problem without minimizer");
      const ReferenceMin<double> ref = cache.get(spec.problem, spec.oracle_budget, problem);
      cfg.anchor = ref.argmin;
      opts.min_h = MinEstimate{ref.value, ref.error_bar};
      result.anchor_source = "oracle";
      break;
    }
    case AnchorPolicy::none:
      if (info.known_min) opts.min_h = MinEstimate{*info.known_min, 0.0};
      break;
  }

  result.trace = solve(problem, cfg);
  opts.liminf_threshold = spec.liminf_threshold;
  opts.liminf_tol = spec.liminf_tol;
  opts.expect_rate = spec.expect_rate;
  opts.checks = spec.checks;
  result.report = build_report(result.trace, opts);
  return result;
}

ordered_json run_json(const RunSpec& spec, const RunResult& r) {
  ordered_json j;
  j["name"] = spec.name;
  j["problem"] = spec.problem;
  j["algorithm"] = to_string(spec.algorithm);
  j["schedule"] = schedule_to_json(spec.schedule);
  j["gamma"] = r.trace.gamma;
  j["max_iters"] = spec.max_iters;
  j["record_every"] = spec.record_every;
  j["iterations"] = r.trace.iterations;
  j["diverging"] = r.trace.diverging;
  j["anchor"] = r.anchor_source;
  if (spec.algorithm == Algorithm::ista) {
    std::vector<double> d(r.trace.displacement.data(),
                          r.trace.displacement.data() + r.trace.displacement.size());
    j["displacement"] = d;
  }
  const ordered_json report = r.report.to_json();
  for (const auto& [k, v] : report.items()) j[k] = v;
  return j;
}

std::vector<std::pair<std::string, Verdict>> schedule_check_verdicts(const ScheduleCheckSpec& spec) {
  std::vector<std::pair<std::string, Verdict>> out;
  const Schedule<double> sched(spec.schedule);
  const std::vector<double> taus = Schedule<double>::prefix(spec.schedule, spec.n + 1);

  const ScheduleInequalityReport ineq = check_schedule_inequalities(taus);
  auto flag = [&](const char* name, bool ok, double worst) {
    Verdict v;
    v.status = ok ? Status::pass : Status::fail;
    v.worst_residual = worst;
    v.location_n = ineq.first_failure ? std::optional<std::size_t>(*ineq.first_failure + 1)
                                      : std::optional<std::size_t>();
    out.emplace_back(name, v);
  };
  flag("bracket", ineq.tau1_ok && ineq.bracket_ok, std::max(ineq.worst_lower, ineq.worst_upper));
  flag("rewrite", ineq.rewrite_ok, ineq.worst_rewrite);
  flag("difference", ineq.difference_ok, ineq.worst_difference);

  // Bounded schedules use the prefix maximum as tau_infinity.
  std::optional<double> tau_inf = sched.tau_infinity();
  if (!tau_inf && sched.bounded()) tau_inf = *std::max_element(taus.begin(), taus.end());
  const QuotientBoundsVerdict q = quotient_bounds_check(taus, tau_inf);
  {
    Verdict v;
    v.status = q.passed ? Status::pass : Status::fail;
    v.worst_residual = q.worst_violation;
    v.location_n = q.first_violation;
    out.emplace_back("quotient_bounds", v);
  }

  if (spec.schedule.kind == ScheduleKind::classical && spec.schedule.tau1 == 1.0) {
    const ClassicalBoundVerdict c = classical_lower_bound_check(spec.n);
    Verdict v;
    v.status = c.passed ? Status::pass : Status::fail;
    v.worst_residual = c.sup_n_over_tau;
    v.location_n = c.first_violation;
    v.note = "sup n/tau_n = " + format_double(c.sup_n_over_tau);
    out.emplace_back("classical_lower_bound", v);
  }
  if (spec.schedule.kind == ScheduleKind::chambolle_dossal) {
    const double r = chambolle_dossal_identity_residual(spec.schedule.rho, spec.n);
    Verdict v;
    v.status = within_tolerance(r, kScheduleTol, 1.0) ? Status::pass : Status::fail;
    v.worst_residual = r;
    out.emplace_back("chambolle_identity", v);
  }
  {
    const double delta = attouch_condition_delta(taus);
    Verdict v;
    v.worst_residual = delta;
    v.location_n = spec.n;
    v.note = "delta = " + format_double(delta);
    if (spec.max_delta) {
      v.status = within_tolerance(delta - *spec.max_delta, kScheduleTol, 1.0) ? Status::pass
                                                                              : Status::fail;
    }
    out.emplace_back("attouch_delta", v);
  }
  return out;
}

namespace {

ordered_json verdicts_json(const std::vector<std::pair<std::string, Verdict>>& vs) {
  ordered_json j = ordered_json::object();
  for (const auto& [name, v] : vs) {
    ordered_json c;
    c["status"] = to_string(v.status);
    c["worst_residual"] = std::isfinite(v.worst_residual) ? ordered_json(v.worst_residual) : nullptr;
    c["location_n"] = v.location_n ? ordered_json(*v.location_n) : nullptr;
    if (!v.note.empty()) c["note"] = v.note;
    j[name] = std::move(c);
  }
  return j;
}

std::vector<std::string> failing(const std::vector<std::pair<std::string, Verdict>>& vs) {
  std::vector<std::string> out;
  for (const auto& [name, v] : vs)
    if (!v.ok()) out.push_back(name + "=" + to_string(v.status));
  return out;
}

void write_json(const fs::path& path, const ordered_json& j) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write " + path.string());
  out << j.dump(2) << '\n';
}

}  // namespace

std::vector<RunOutcome> run_suite(const SuiteConfig& cfg, const std::string& out_dir, unsigned jobs) {
  fs::create_directories(out_dir);
  OracleCache cache;
  std::vector<RunOutcome> outcomes(cfg.runs.size());
  std::atomic<std::size_t> next{0};

  auto worker = [&] {
    for (std::size_t i = next++; i < cfg.runs.size(); i = next++) {
      const RunSpec& spec = cfg.runs[i];
      RunOutcome& o = outcomes[i];
      o.name = spec.name;
      try {
        const RunResult r = execute_run(spec, cache);
        write_trace_csv((fs::path(out_dir) / (spec.name + ".csv")).string(), r.trace);
        write_json(fs::path(out_dir) / (spec.name + ".json"), run_json(spec, r));
        o.failed_checks = failing(r.report.verdicts);
        o.exit_code = o.failed_checks.empty() ? kExitOk : kExitCheckFailed;
      } catch (const OracleUnreliable& e) {
        o.exit_code = kExitOracle;
        o.error = e.what();
      } catch (const AdmissibilityError& e) {
        o.exit_code = kExitInadmissible;
        o.error = e.what();
      } catch (const ConfigError& e) {
        o.exit_code = kExitConfig;
        o.error = e.what();
      } catch (const InvalidArgument& e) {
        // Bad step, starting point size and the like come straight from the config.
        o.exit_code = kExitConfig;
        o.error = e.what();
      } catch (const DimensionMismatch& e) {
        o.exit_code = kExitConfig;
        o.error = e.what();
      } catch (const nlohmann::json::exception& e) {
        o.exit_code = kExitConfig;
        o.error = e.what();
      } catch (const std::exception& e) {
        o.exit_code = kExitCheckFailed;
        o.error = e.what();
      }
    }
  };

  if (jobs == 0) jobs = std::max(1u, std::thread::hardware_concurrency());
  jobs = static_cast<unsigned>(std::min<std::size_t>(jobs, std::max<std::size_t>(1, cfg.runs.size())));
  std::vector<std::thread> pool;
  for (unsigned k = 1; k < jobs; ++k) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  for (const ScheduleCheckSpec& s : cfg.schedule_checks) {
    RunOutcome o;
    o.name = s.name;
    const auto vs = schedule_check_verdicts(s);
    ordered_json j;
    j["name"] = s.name;
    j["schedule"] = schedule_to_json(s.schedule);
    j["n"] = s.n;
    j["verdicts"] = verdicts_json(vs);
    write_json(fs::path(out_dir) / (s.name + ".json"), j);
    o.failed_checks = failing(vs);
    o.exit_code = o.failed_checks.empty() ? kExitOk : kExitCheckFailed;
    outcomes.push_back(std::move(o));
  }

  if (cfg.sequence_lemmas) {
    RunOutcome o;
    o.name = "sequence_lemmas";
    const auto vs = sequence_lemma_checks();
    ordered_json j;
    j["name"] = o.name;
    j["verdicts"] = verdicts_json(vs);
    write_json(fs::path(out_dir) / "sequence_lemmas.json", j);
    o.failed_checks = failing(vs);
    o.exit_code = o.failed_checks.empty() ? kExitOk : kExitCheckFailed;
    outcomes.push_back(std::move(o));
  }
  return outcomes;
}

std::optional<std::uint64_t> seed_from_environment() {
  const char* s = std::getenv("APG_SEED");
  if (!s || !*s) return std::nullopt;
  char* end = nullptr;
  const unsigned long long v = std::strtoull(s, &end, 10);
  if (*end != '\0') throw ConfigError("APG_SEED must be a non-negative integer");
  return static_cast<std::uint64_t>(v);
}

int cmd_run(const std::string& config_path, unsigned jobs, const std::string& out_dir,
            std::ostream& out, std::ostream& err) {
  SuiteConfig cfg;
  try {
    cfg = load_suite(config_path, seed_from_environment());
  } catch (const AdmissibilityError& e) {
    err << "inadmissible schedule: " << e.what() << '\n';
    return kExitInadmissible;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  }

  std::vector<RunOutcome> outcomes;
  try {
    outcomes = run_suite(cfg, out_dir, jobs);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  }

  // Most severe code wins: config, inadmissible and oracle errors over check failures.
  int code = kExitOk;
  auto rank = [](int c) {
    switch (c) {
      case kExitConfig:
        return 4;
      case kExitInadmissible:
        return 3;
      case kExitOracle:
        return 2;
      case kExitCheckFailed:
        return 1;
      default:
        return 0;
    }
  };
  for (const RunOutcome& o : outcomes) {
    out << (o.exit_code == kExitOk ? "PASS " : "FAIL ") << o.name;
    if (!o.error.empty()) out << "  error: " << o.error;
    for (const std::string& f : o.failed_checks) out << ' ' << f;
    out << '\n';
    if (rank(o.exit_code) > rank(code)) code = o.exit_code;
  }
  out << outcomes.size() << " entries, exit " << code << '\n';
  return code;
}

}  // namespace apg
