#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include "apg/harness/config.hpp"
#include "apg/harness/plotdata.hpp"
#include "apg/harness/runner.hpp"
#include "apg/io/trace_csv.hpp"
#include "apg/prox/catalog.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("apg-harness-" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

fs::path write_config(const fs::path& dir, const json& j) {
  const fs::path p = dir / "config.json";
  std::ofstream(p) << j.dump(2);
  return p;
}

int run_config(const std::string& name, const json& j, std::string* err_text = nullptr) {
  const fs::path dir = scratch(name);
  std::ostringstream out, err;
  const int code = apg::cmd_run(write_config(dir, j).string(), 2, (dir / "out").string(), out, err);
  if (err_text) *err_text = err.str() + out.str();
  return code;
}

json small_run(json schedule, const std::string& algorithm = "fista") {
  return json{{"name", "r"},
              {"problem", {{"smooth", {{"name", "lasso"}, {"dim", 5}, {"seed", 3}}}}},
              {"algorithm", algorithm},
              {"schedule", schedule},
              {"max_iters", 200}};
}

}  // namespace

TEST_CASE("format_double is shortest round-trip") {
  CHECK(apg::format_double(0.1) == "0.1");
  CHECK(apg::format_double(1.0) == "1");
  CHECK(apg::format_double(-2.5e-300) == "-2.5e-300");
  const double third = 1.0 / 3.0;
  CHECK(std::stod(apg::format_double(third)) == third);
}

TEST_CASE("trace CSV round trip") {
  apg::SolverConfig<double> c;
  c.max_iters = 300;
  Eigen::MatrixXd a = Eigen::MatrixXd::Identity(2, 2);
  a(1, 1) = 4;
  const auto p = apg::quadratic_problem<double>(a, Eigen::VectorXd::Ones(2));
  c.anchor = *p.info().witness;
  const auto t = apg::fista_run(p, c);
  const fs::path dir = scratch("csv");
  const std::string path = (dir / "t.csv").string();
  apg::write_trace_csv(path, t);

  std::ifstream in(path);
  std::string header;
  std::getline(in, header);
  CHECK(header == apg::kTraceCsvHeader);

  const auto rows = apg::read_trace_csv(path);
  REQUIRE(rows.size() == t.records.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    CHECK(rows[i].n == t.records[i].n);
    CHECK(rows[i].h_xn == t.records[i].h_xn);
    CHECK(rows[i].sigma_n == t.records[i].sigma_n);
    CHECK(rows[i].tau_n == t.records[i].tau_n);
    CHECK(rows[i].x_norm == t.records[i].x_norm);
    CHECK(rows[i].lyapunov_E == t.records[i].lyapunov_E);
    CHECK(rows[i].key_residual == t.records[i].key_residual);
  }

  std::ofstream(dir / "bad.csv") << "n,foo\n1,2\n";
  CHECK_THROWS_AS(apg::read_trace_csv((dir / "bad.csv").string()), apg::ConfigError);
  CHECK_THROWS_AS(apg::read_trace_csv((dir / "missing.csv").string()), apg::ConfigError);
}

TEST_CASE("config parsing") {
  json j = {{"schema_version", 1}, {"runs", json::array({small_run({{"kind", "chambolle_dossal"}, {"rho", 3}})})}};
  const auto cfg = apg::parse_suite(j);
  REQUIRE(cfg.runs.size() == 1);
  CHECK(cfg.runs[0].schedule.kind == apg::ScheduleKind::chambolle_dossal);
  CHECK(cfg.runs[0].schedule.rho == 3.0);
  CHECK(cfg.runs[0].problem["nonsmooth"]["name"] == "auto");

  const auto overridden = apg::parse_suite(j, 99);
  CHECK(overridden.runs[0].problem["smooth"]["seed"] == 99);

  CHECK_THROWS_AS(apg::parse_suite(json{{"schema_version", 7}}), apg::ConfigError);
  json unknown_check = j;
  unknown_check["runs"][0]["checks"] = {"no_such_check"};
  CHECK_THROWS_AS(apg::parse_suite(unknown_check), apg::ConfigError);
  json no_seed = j;
  no_seed["runs"][0]["problem"]["smooth"].erase("seed");
  CHECK_THROWS_AS(apg::build_problem(apg::parse_suite(no_seed).runs[0].problem), apg::ConfigError);
  json bad = j;
  bad["runs"][0]["schedule"] = {{"kind", "custom"}, {"values", {1, 3}}};
  CHECK_THROWS_AS(apg::parse_suite(bad), apg::AdmissibilityError);

  const auto s = apg::parse_schedule(apg::schedule_to_json(apg::ScheduleSpec::aujol_dossal(5, 0.5)));
  CHECK(s.kind == apg::ScheduleKind::aujol_dossal);
  CHECK(s.a == 5.0);
  CHECK(s.d == 0.5);
}

TEST_CASE("build_problem resolves catalog names") {
  const auto p = apg::build_problem(json{{"smooth", {{"name", "quadratic"}, {"A", {{1, 0}, {0, 4}}}, {"b", {1, 1}}}},
                                         {"nonsmooth", {{"name", "auto"}}}});
  CHECK(p.dim() == 2);
  CHECK(*p.info().known_min == doctest::Approx(-0.625));
  const auto box = apg::build_problem(json{{"smooth", {{"name", "quadratic"}, {"A", {{2, 1}, {1, 2}}}, {"b", {4, -3}}}},
                                           {"nonsmooth", {{"name", "box"}, {"lo", {0, 0}}, {"hi", {1, 1}}}}});
  CHECK(*box.info().known_argmin_nonempty);
  const auto aff = apg::build_problem(json{{"smooth", {{"name", "affine-descent"}}}, {"nonsmooth", {{"name", "auto"}}}, {"gamma", 1}});
  CHECK(aff.gamma() == 1.0);
  CHECK_THROWS_AS(apg::build_problem(json{{"smooth", {{"name", "rosenbrock"}}}, {"nonsmooth", {{"name", "zero"}}}}),
                  apg::ConfigError);
}

TEST_CASE("cmd_run exit codes") {
  json ok = {{"schema_version", 1}, {"runs", json::array({small_run({{"kind", "classical"}})})}};
  CHECK(run_config("ok", ok) == apg::kExitOk);

  json inadmissible = {{"schema_version", 1},
                       {"runs", json::array({small_run({{"kind", "custom"}, {"values", {1, 3}}})})}};
  CHECK(run_config("inadmissible", inadmissible) == apg::kExitInadmissible);

  json aujol = {{"schema_version", 1},
                {"runs", json::array({small_run({{"kind", "aujol_dossal"}, {"a", 1}, {"d", 1}})})}};
  CHECK(run_config("aujol", aujol) == apg::kExitInadmissible);

  std::ostringstream out, err;
  CHECK(apg::cmd_run("/nonexistent/config.json", 1, scratch("missing").string(), out, err) == apg::kExitConfig);

  const fs::path dir = scratch("garbage");
  std::ofstream(dir / "config.json") << "{ not json";
  CHECK(apg::cmd_run((dir / "config.json").string(), 1, (dir / "out").string(), out, err) == apg::kExitConfig);

  json too_long_step = ok;
  too_long_step["runs"][0]["problem"]["gamma"] = 50.0;
  CHECK(run_config("gamma", too_long_step) == apg::kExitConfig);

  // Two ISTA steps against two MFISTA steps cannot agree to 1e-8.
  json oracle = ok;
  oracle["runs"][0]["oracle_budget"] = 2;
  oracle["runs"][0]["anchor"] = "oracle";
  CHECK(run_config("oracle", oracle) == apg::kExitOracle);

  // A failing non-exploratory check: the rate expectation cannot hold.
  json failing = ok;
  failing["runs"][0]["expect_rate"] = 1000.0;
  std::string text;
  CHECK(run_config("failing", failing, &text) == apg::kExitCheckFailed);
  CHECK(text.find("fitted_rate") != std::string::npos);
}

TEST_CASE("run writes a trace and a report per entry") {
  const fs::path dir = scratch("outputs");
  json cfg = {{"schema_version", 1},
              {"runs", json::array({small_run({{"kind", "classical"}}),
                                    small_run({{"kind", "constant"}, {"tau", 1}}, "ista")})}};
  cfg["runs"][1]["name"] = "r-ista";
  std::ostringstream out, err;
  CHECK(apg::cmd_run(write_config(dir, cfg).string(), 2, (dir / "out").string(), out, err) == 0);
  CHECK(fs::exists(dir / "out" / "r.csv"));
  CHECK(fs::exists(dir / "out" / "r-ista.json"));
  json report;
  std::ifstream(dir / "out" / "r.json") >> report;
  CHECK(report["verdicts"]["keyineq"]["status"] == "pass");
  CHECK(report.contains("displacement") == false);
  json ista;
  std::ifstream(dir / "out" / "r-ista.json") >> ista;
  CHECK(ista.contains("displacement"));
}

TEST_CASE("plotdata") {
  const fs::path dir = scratch("plot");
  json cfg = {{"schema_version", 1}, {"runs", json::array({small_run({{"kind", "classical"}})})}};
  std::ostringstream out, err;
  REQUIRE(apg::cmd_run(write_config(dir, cfg).string(), 1, (dir / "out").string(), out, err) == 0);
  const std::string trace = (dir / "out" / "r.csv").string();

  apg::PlotOptions o;
  o.quantity = "nonsense";
  CHECK(apg::cmd_plotdata({trace}, o, out, err) == apg::kExitConfig);

  o.quantity = "sigma";
  o.out_dir = (dir / "plots").string();
  CHECK(apg::cmd_plotdata({trace}, o, out, err) == 0);
  CHECK(fs::exists(dir / "plots" / "r.sigma.dat"));
  CHECK(fs::exists(dir / "plots" / "sigma.svg"));

  o.quantity = "h_gap";
  o.loglog = true;
  CHECK(apg::cmd_plotdata({trace}, o, out, err) == 0);
  std::ifstream svg(dir / "plots" / "h_gap.svg");
  std::string first;
  std::getline(svg, first);
  CHECK(first.rfind("<svg", 0) == 0);

  CHECK(apg::cmd_plotdata({(dir / "missing.csv").string()}, o, out, err) == apg::kExitConfig);
}
