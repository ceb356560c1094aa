// apg: batch runner, schedule tables and plot data for the proximal-gradient laboratory.

#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "apg/harness/plotdata.hpp"
#include "apg/harness/runner.hpp"
#include "apg/harness/schedule_table.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Accelerated proximal-gradient laboratory"};
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "Execute a run matrix from a JSON config");
  std::string config;
  unsigned jobs = 0;
  std::string out_dir = "apg-out";
  run->add_option("config", config, "Config file")->required();
  run->add_option("--jobs", jobs, "Worker threads (0 = hardware concurrency)");
  run->add_option("--out", out_dir, "Output directory");

  auto* sched = app.add_subcommand("schedule", "Print a momentum schedule table with checks");
  std::string kind;
  std::optional<double> rho, a, d, tau;
  std::size_t n = 20;
  sched->add_option("kind", kind, "constant | classical | chambolle_dossal | aujol_dossal | attouch_shifted")
      ->required();
  sched->add_option("--rho", rho, "rho for chambolle_dossal / attouch_shifted");
  sched->add_option("--a", a, "a for aujol_dossal");
  sched->add_option("--d", d, "d for aujol_dossal");
  sched->add_option("--tau", tau, "tau for constant, tau_1 for classical");
  sched->add_option("--n", n, "Number of rows")->required();

  auto* plot = app.add_subcommand("plotdata", "Emit data files and an SVG chart from traces");
  std::vector<std::string> traces;
  apg::PlotOptions popts;
  std::optional<double> min_h;
  plot->add_option("traces", traces, "Trace CSV files")->required();
  plot->add_option("--quantity", popts.quantity, "h_gap | sigma | step_norm | x_norm | lyapunov_E | n_times_gap")
      ->required();
  plot->add_flag("--loglog", popts.loglog, "Log-log axes");
  plot->add_option("--min-h", min_h, "Reference minimum for gap quantities");
  plot->add_option("--out", popts.out_dir, "Output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : apg::kExitConfig;
  }

  if (*run) return apg::cmd_run(config, jobs, out_dir, std::cout, std::cerr);

  if (*sched) {
    apg::ScheduleSpec spec;
    try {
      spec.kind = apg::schedule_kind_from_string(kind);
    } catch (const apg::Error& e) {
      std::cerr << e.what() << '\n';
      return apg::kExitConfig;
    }
    if (rho) spec.rho = *rho;
    if (a) spec.a = *a;
    if (d) spec.d = *d;
    if (tau) {
      spec.tau = *tau;
      spec.tau1 = *tau;
    }
    if (spec.kind == apg::ScheduleKind::custom) {
      std::cerr << "custom schedules are read from run configs\n";
      return apg::kExitConfig;
    }
    return apg::cmd_schedule(spec, n, std::cout, std::cerr);
  }

  popts.min_h = min_h;
  return apg::cmd_plotdata(traces, popts, std::cout, std::cerr);
}
