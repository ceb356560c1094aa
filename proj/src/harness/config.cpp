#include "apg/harness/config.hpp"

#include <algorithm>
#include <fstream>
#include <set>

#include "apg/diagnostics/report.hpp"
#include "apg/prox/catalog.hpp"

namespace apg {

using nlohmann::json;

namespace {

// Accepts "name" or {"name": ..., params...}.
json term_block(const json& j, const char* what) {
  if (j.is_string()) return json{{"name", j.get<std::string>()}};
  if (j.is_object() && j.contains("name") && j["name"].is_string()) return j;
  throw ConfigError(std::string(what) + ": expected a catalog name or an object with \"name\"");
}

template <typename T>
T get_or(const json& j, const char* key, T fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("field '") + key + "': " + e.what());
  }
}

Point<double> vector_from(const json& j, const char* what) {
  if (!j.is_array()) throw ConfigError(std::string(what) + ": expected an array of numbers");
  Point<double> v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) throw ConfigError(std::string(what) + ": non-numeric entry");
    v(static_cast<Eigen::Index>(i)) = j[i].get<double>();
  }
  return v;
}

Matrix<double> matrix_from(const json& j, const char* what) {
  if (!j.is_array() || j.empty() || !j[0].is_array())
    throw ConfigError(std::string(what) + ": expected an array of rows");
  const std::size_t rows = j.size();
  const std::size_t cols = j[0].size();
  Matrix<double> m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (std::size_t i = 0; i < rows; ++i) {
    if (!j[i].is_array() || j[i].size() != cols) throw ConfigError(std::string(what) + ": ragged rows");
    for (std::size_t k = 0; k < cols; ++k) {
      if (!j[i][k].is_number()) throw ConfigError(std::string(what) + ": non-numeric entry");
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = j[i][k].get<double>();
    }
  }
  return m;
}

Algorithm parse_algorithm(const json& j) {
  try {
    return algorithm_from_string(j.get<std::string>());
  } catch (const InvalidArgument& e) {
    throw ConfigError(e.what());
  } catch (const json::exception&) {
    throw ConfigError("algorithm must be a string");
  }
}

}  // namespace

AnchorPolicy anchor_policy_from_string(const std::string& name) {
  if (name == "auto") return AnchorPolicy::automatic;
  if (name == "witness") return AnchorPolicy::witness;
  if (name == "oracle") return AnchorPolicy::oracle;
  if (name == "none") return AnchorPolicy::none;
  throw ConfigError("unknown anchor policy '" + name + "'");
}

std::string to_string(AnchorPolicy p) {
  switch (p) {
    case AnchorPolicy::automatic:
      return "auto";
    case AnchorPolicy::witness:
      return "witness";
    case AnchorPolicy::oracle:
      return "oracle";
    case AnchorPolicy::none:
      return "none";
  }
  return "unknown";
}

ScheduleSpec parse_schedule(const json& j) {
  if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string())
    throw ConfigError("schedule: expected an object with a string \"kind\"");
  ScheduleSpec s;
  try {
    s.kind = schedule_kind_from_string(j["kind"].get<std::string>());
  } catch (const InvalidArgument& e) {
    throw ConfigError(e.what());
  }
  switch (s.kind) {
    case ScheduleKind::constant:
      s.tau = get_or(j, "tau", 1.0);
      break;
    case ScheduleKind::classical:
      s.tau1 = get_or(j, "tau1", 1.0);
      break;
    case ScheduleKind::chambolle_dossal:
    case ScheduleKind::attouch_shifted:
      if (!j.contains("rho")) throw ConfigError("schedule " + to_string(s.kind) + " needs rho");
      s.rho = get_or(j, "rho", 2.0);
      break;
    case ScheduleKind::aujol_dossal:
      if (!j.contains("a") || !j.contains("d")) throw ConfigError("aujol_dossal needs a and d");
      s.a = get_or(j, "a", 5.0);
      s.d = get_or(j, "d", 0.5);
      break;
    case ScheduleKind::custom:
      if (!j.contains("values") || !j["values"].is_array())
        throw ConfigError("custom schedule needs a \"values\" array");
      s.values = get_or(j, "values", std::vector<double>{});
      break;
  }
  return s;
}

json schedule_to_json(const ScheduleSpec& s) {
  json j{{"kind", to_string(s.kind)}};
  switch (s.kind) {
    case ScheduleKind::constant:
      j["tau"] = s.tau;
      break;
    case ScheduleKind::classical:
      j["tau1"] = s.tau1;
      break;
    case ScheduleKind::chambolle_dossal:
    case ScheduleKind::attouch_shifted:
      j["rho"] = s.rho;
      break;
    case ScheduleKind::aujol_dossal:
      j["a"] = s.a;
      j["d"] = s.d;
      break;
    case ScheduleKind::custom:
      j["values"] = s.values;
      break;
  }
  return j;
}

SuiteConfig parse_suite(const json& j, std::optional<std::uint64_t> seed_override) {
  if (!j.is_object()) throw ConfigError("config: top level must be an object");
  SuiteConfig cfg;
  cfg.schema_version = get_or(j, "schema_version", -1);
  if (cfg.schema_version != kConfigSchemaVersion)
    throw ConfigError("config: schema_version must be " + std::to_string(kConfigSchemaVersion));
  cfg.sequence_lemmas = get_or(j, "sequence_lemmas", false);

  std::set<std::string> names;
  auto claim = [&](const std::string& name) {
    if (name.empty() || name.find_first_of("/\\") != std::string::npos)
      throw ConfigError("invalid run name '" + name + "'");
    if (!names.insert(name).second) throw ConfigError("duplicate run name '" + name + "'");
  };

  if (j.contains("runs")) {
    if (!j["runs"].is_array()) throw ConfigError("config: \"runs\" must be an array");
    for (const json& r : j["runs"]) {
      if (!r.is_object()) throw ConfigError("run entries must be objects");
      RunSpec run;
      run.name = get_or(r, "name", std::string());
      claim(run.name);
      if (!r.contains("problem")) throw ConfigError(run.name + ": missing problem");
      run.problem = r["problem"];
      if (!run.problem.is_object() || !run.problem.contains("smooth"))
        throw ConfigError(run.name + ": problem needs a \"smooth\" term");
      run.problem["smooth"] = term_block(run.problem["smooth"], "smooth");
      run.problem["nonsmooth"] = term_block(
          run.problem.contains("nonsmooth") ? run.problem["nonsmooth"] : json("auto"), "nonsmooth");
      if (seed_override && run.problem["smooth"].contains("seed"))
        run.problem["smooth"]["seed"] = *seed_override;
      run.algorithm = r.contains("algorithm") ? parse_algorithm(r["algorithm"]) : Algorithm::fista;
      if (r.contains("schedule")) {
        run.schedule = parse_schedule(r["schedule"]);
      } else {
        run.schedule = run.algorithm == Algorithm::ista ? ScheduleSpec::constant(1.0)
                                                        : ScheduleSpec::classical();
      }
      run.max_iters = get_or<std::size_t>(r, "max_iters", 1000);
      run.record_every = get_or<std::size_t>(r, "record_every", 1);
      if (run.max_iters == 0 || run.record_every == 0)
        throw ConfigError(run.name + ": max_iters and record_every must be positive");
      if (r.contains("x0")) run.x0 = get_or(r, "x0", std::vector<double>{});
      run.anchor = anchor_policy_from_string(get_or(r, "anchor", std::string("auto")));
      run.oracle_budget = get_or<std::size_t>(r, "oracle_budget", 100000);
      run.checks = get_or(r, "checks", std::vector<std::string>{});
      for (const std::string& c : run.checks) {
        const auto& known = check_names();
        if (std::find(known.begin(), known.end(), c) == known.end())
          throw ConfigError(run.name + ": unknown check '" + c + "'");
      }
      if (r.contains("expect_rate")) run.expect_rate = get_or(r, "expect_rate", 0.0);
      run.liminf_threshold = get_or(r, "liminf_threshold", -1e6);
      run.liminf_tol = get_or(r, "liminf_tol", 1e-2);

      // Resolve the problem now so catalog errors surface as config errors.
      try {
        (void)build_problem(run.problem);
      } catch (const ConfigError&) {
        throw;
      } catch (const Error& e) {
        throw ConfigError(run.name + ": " + e.what());
      } catch (const json::exception& e) {
        throw ConfigError(run.name + ": " + e.what());
      }
      if (run.algorithm == Algorithm::ista &&
          (run.schedule.kind != ScheduleKind::constant || run.schedule.tau != 1.0))
        throw ConfigError(run.name + ": ista requires the constant schedule tau = 1");
      // Eager admissibility check; throws AdmissibilityError.
      (void)Schedule<double>(run.schedule);
      cfg.runs.push_back(std::move(run));
    }
  }

  if (j.contains("schedule_checks")) {
    if (!j["schedule_checks"].is_array()) throw ConfigError("\"schedule_checks\" must be an array");
    for (const json& s : j["schedule_checks"]) {
      ScheduleCheckSpec c;
      c.name = get_or(s, "name", std::string());
      claim(c.name);
      if (!s.contains("schedule")) throw ConfigError(c.name + ": missing schedule");
      c.schedule = parse_schedule(s["schedule"]);
      c.n = get_or<std::size_t>(s, "n", 100000);
      if (s.contains("max_delta")) c.max_delta = get_or(s, "max_delta", 0.0);
      (void)Schedule<double>(c.schedule);
      cfg.schedule_checks.push_back(std::move(c));
    }
  }
  return cfg;
}

SuiteConfig load_suite(const std::string& path, std::optional<std::uint64_t> seed_override) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ConfigError(path + ": " + e.what());
  }
  return parse_suite(j, seed_override);
}

CompositeProblem<double> build_problem(const json& problem) {
  const json& sm = problem.at("smooth");
  const json& ns = problem.at("nonsmooth");
  const std::string smooth = sm.at("name").get<std::string>();
  std::string nonsmooth = ns.at("name").get<std::string>();

  std::optional<SmoothTerm<double>> f;
  ProblemInfo<double> info;
  Eigen::Index dim = 0;
  std::optional<double> lasso_weight;
  std::optional<Matrix<double>> quad_a;
  std::optional<Point<double>> quad_b;

  if (smooth == "lasso") {
    if (!sm.contains("seed")) throw ConfigError("lasso: a seed is required");
    dim = get_or<Eigen::Index>(sm, "dim", 10);
    const auto seed = get_or<std::uint64_t>(sm, "seed", 0);
    LassoData<double> data = make_lasso_data<double>(dim, seed);
    f = make_least_squares<double>(data.a, data.b);
    lasso_weight = data.weight;
  } else if (smooth == "quadratic") {
    if (!sm.contains("A") || !sm.contains("b")) throw ConfigError("quadratic needs A and b");
    quad_a = matrix_from(sm["A"], "quadratic A");
    quad_b = vector_from(sm["b"], "quadratic b");
    if (quad_a->rows() != quad_b->size()) throw ConfigError("quadratic: A and b sizes differ");
    f = make_quadratic<double>(*quad_a, *quad_b);
    dim = quad_a->rows();
  } else if (smooth == "affine-descent") {
    f = make_affine_descent<double>(get_or(sm, "beta", 1.0));
    dim = 1;
  } else if (smooth == "unattained") {
    f = make_unattained_infimum<double>();
    dim = 1;
  } else {
    throw ConfigError("unknown smooth term '" + smooth + "'");
  }

  if (nonsmooth == "auto") nonsmooth = lasso_weight ? "l1" : "zero";
  NonsmoothTerm<double> g;
  if (nonsmooth == "zero") {
    g = make_zero<double>(dim);
  } else if (nonsmooth == "l1") {
    const double w = get_or(ns, "weight", lasso_weight.value_or(1.0));
    g = make_l1<double>(w, dim);
  } else if (nonsmooth == "box") {
    if (!ns.contains("lo") || !ns.contains("hi")) throw ConfigError("box needs lo and hi");
    const Point<double> lo = vector_from(ns["lo"], "box lo");
    const Point<double> hi = vector_from(ns["hi"], "box hi");
    if (lo.size() != dim || hi.size() != dim) throw ConfigError("box: bounds do not match dimension");
    g = make_indicator_box<double>(lo, hi);
  } else {
    throw ConfigError("unknown nonsmooth term '" + nonsmooth + "'");
  }

  // Analytic metadata for the combinations the catalog knows.
  if (smooth == "lasso" && nonsmooth == "l1" && g.name == "l1") {
    info.known_argmin_nonempty = get_or(ns, "weight", *lasso_weight) > 0;
  } else if (smooth == "quadratic") {
    Eigen::LLT<Matrix<double>> llt(*quad_a);
    const bool pd = llt.info() == Eigen::Success;
    if (nonsmooth == "zero" && pd) {
      CompositeProblem<double> q = quadratic_problem<double>(*quad_a, *quad_b);
      info = q.info();
    } else if (pd || nonsmooth == "box") {
      info.known_argmin_nonempty = true;  // coercive or compact domain
    }
  } else if (smooth == "affine-descent" && nonsmooth == "zero") {
    info.known_argmin_nonempty = false;
    info.known_inf = ExtendedReal<double>::minus_infinity();
  } else if (smooth == "unattained" && nonsmooth == "zero") {
    info.known_argmin_nonempty = false;
    info.known_inf = ExtendedReal<double>(0.0);
  } else if (nonsmooth == "box") {
    info.known_argmin_nonempty = true;
  }

  if (problem.contains("gamma")) {
    const double gamma = get_or(problem, "gamma", 1.0);
    return CompositeProblem<double>(std::move(*f), std::move(g), gamma, dim, std::move(info));
  }
  return CompositeProblem<double>(std::move(*f), std::move(g), dim, std::move(info));
}

}  // namespace apg
