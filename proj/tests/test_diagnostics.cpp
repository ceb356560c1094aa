#include <doctest.h>

#include <cmath>

#include "apg/diagnostics/certify.hpp"
#include "apg/diagnostics/fit_rate.hpp"
#include "apg/diagnostics/oracle.hpp"
#include "apg/diagnostics/report.hpp"
#include "apg/diagnostics/sequence_lemmas.hpp"
#include "apg/prox/catalog.hpp"
#include "oracles.hpp"

using apg::ScheduleSpec;
using apg::Status;
using apg::Trace;
using Vec = apg::Point<double>;
using Mat = apg::Matrix<double>;

namespace {

apg::SolverConfig<double> config(apg::Algorithm alg, ScheduleSpec s, std::size_t iters) {
  apg::SolverConfig<double> c;
  c.algorithm = alg;
  c.schedule = std::move(s);
  c.max_iters = iters;
  return c;
}

// Trace whose h values are min + gap(n) with every other field consistent for a resting
// iterate.
Trace synthetic_trace(std::size_t n_max, const std::function<double(double)>& gap) {
  Trace t;
  t.algorithm = apg::Algorithm::fista;
  t.schedule = ScheduleSpec::classical();
  t.argmin_nonempty = true;
  for (std::size_t n = 1; n <= n_max; ++n) {
    apg::IterationRecord<double> r;
    r.n = n;
    r.h_xn = gap(static_cast<double>(n));
    r.sigma_n = r.h_xn;
    t.records.push_back(r);
  }
  t.iterations = n_max;
  return t;
}

struct LassoCase {
  apg::CompositeProblem<double> problem;
  double min_h;
  Vec argmin;
};

LassoCase lasso(Eigen::Index d, std::uint64_t seed) {
  const auto data = apg::make_lasso_data<double>(d, seed);
  Vec z;
  const double m = oracle::lasso_min(data.a, data.b, data.weight, &z);
  return {apg::lasso_problem<double>(d, seed), m, z};
}

}  // namespace

TEST_CASE("fit_rate recovers exact power laws") {
  for (double p0 : {1.0, 2.0}) {
    std::vector<std::size_t> ns;
    std::vector<double> gaps;
    for (std::size_t n = 1; n <= 10000; ++n) {
      ns.push_back(n);
      gaps.push_back(std::pow(static_cast<double>(n), -p0));
    }
    const auto fit = apg::fit_rate(ns, gaps);
    REQUIRE(fit);
    CHECK(std::abs(fit->p - p0) <= 0.01);
    CHECK(fit->C == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(fit->n_lo == 100);
    CHECK(fit->n_hi == 10000);
    CHECK_FALSE(fit->underflow);
  }
}

TEST_CASE("fit_rate stops at the underflow") {
  std::vector<std::size_t> ns;
  std::vector<double> gaps;
  for (std::size_t n = 1; n <= 1000; ++n) {
    ns.push_back(n);
    gaps.push_back(n < 500 ? 3.0 / (static_cast<double>(n) * n) : 0.0);
  }
  const auto fit = apg::fit_rate(ns, gaps);
  REQUIRE(fit);
  CHECK(fit->underflow);
  CHECK(*fit->underflow_n == 500);
  CHECK(fit->n_hi == 499);
  CHECK(std::abs(fit->p - 2.0) < 1e-9);
  CHECK_FALSE(apg::fit_rate({1, 2}, {1.0, 0.5}));
  CHECK(apg::gap_floor(0.0, 0.0) > 0);
  CHECK(apg::gap_floor(1e6, 1e-12) == doctest::Approx(64 * 2.220446049250313e-16 * 1e6));
}

TEST_CASE("decade maxima") {
  std::vector<std::size_t> ns;
  std::vector<double> v;
  for (std::size_t n = 1; n <= 10000; ++n) {
    ns.push_back(n);
    v.push_back(1.0 / static_cast<double>(n));
  }
  const auto m = apg::decade_maxima(ns, v, 0.0);
  REQUIRE(m.size() == 5);
  CHECK(m[0] == 1.0);
  CHECK(m[1] == 0.1);
  CHECK(apg::decade_maxima_vanishing(m));
  CHECK_FALSE(apg::decade_maxima_vanishing({1.0, 1.0, 1.0, 1.0}));
  CHECK_FALSE(apg::decade_maxima_vanishing({1.0, 0.5}));
  CHECK(apg::decade_maxima_vanishing({2.0, 1.0, 0.5, 0.0, 0.0}));
}

TEST_CASE("reference_min") {
  const auto q = apg::CompositeProblem<double>(apg::make_quadratic<double>(Mat::Identity(1, 1), Vec::Zero(1)),
                                               apg::make_zero<double>(1), 1.0, 1);
  const auto r = apg::reference_min(q, 100, std::optional<Vec>(Vec::Constant(1, 3.0)));
  CHECK(r.value == 0.0);
  CHECK(r.error_bar == 0.0);

  const LassoCase c = lasso(10, 1);
  const auto ref = apg::reference_min(c.problem, 100000);
  CHECK(ref.error_bar < 1e-10);
  CHECK(std::abs(ref.value - c.min_h) < 1e-10);
  CHECK((ref.argmin - c.argmin).norm() < 1e-6);

  CHECK_THROWS_AS(apg::reference_min(apg::unattained_problem<double>(), 100), apg::DomainError);
}

TEST_CASE("O(1/n^2) certificate") {
  for (const auto& spec : {ScheduleSpec::classical(), ScheduleSpec::chambolle_dossal(2),
                           ScheduleSpec::chambolle_dossal(3), ScheduleSpec::chambolle_dossal(5)}) {
    CAPTURE(spec.describe());
    const LassoCase c = lasso(10, 1);
    auto cfg = config(apg::Algorithm::fista, spec, 10000);
    cfg.anchor = c.argmin;
    const Trace t = apg::fista_run(c.problem, cfg);
    const auto v = apg::certify_O_one_over_n2(t, apg::MinEstimate{c.min_h, 0.0});
    CHECK(v.status == Status::pass);
  }

  // 1D quadratic: gap is zero after one step.
  const auto q = apg::quadratic_problem<double>(Mat::Identity(1, 1), Vec::Zero(1));
  auto cfg = config(apg::Algorithm::fista, ScheduleSpec::attouch_shifted(2), 50);
  cfg.anchor = Vec::Zero(1);
  cfg.x0 = Vec::Constant(1, 4.0);
  const Trace t = apg::fista_run(q, cfg);
  CHECK(apg::certify_O_one_over_n2(t, apg::MinEstimate{0.0, 0.0}).status == Status::pass);

  const Trace u = apg::fista_run(apg::unattained_problem<double>(), config(apg::Algorithm::fista, ScheduleSpec::classical(), 100));
  CHECK(apg::certify_O_one_over_n2(u, apg::MinEstimate{0.0, 0.0}).status == Status::not_applicable);

  const LassoCase c = lasso(10, 1);
  auto au = config(apg::Algorithm::fista, ScheduleSpec::aujol_dossal(5, 0.5), 100);
  au.anchor = c.argmin;
  CHECK(apg::certify_O_one_over_n2(apg::fista_run(c.problem, au), apg::MinEstimate{c.min_h, 0.0}).status ==
        Status::not_applicable);
}

TEST_CASE("certificate fails on a trace that violates the bound") {
  // Gap decays like 1/n while the energy bound decays like 1/n^2.
  const LassoCase c = lasso(10, 1);
  auto cfg = config(apg::Algorithm::fista, ScheduleSpec::classical(), 100);
  cfg.anchor = c.argmin;
  Trace t = apg::fista_run(c.problem, cfg);
  for (auto& r : t.records) r.h_xn = c.min_h + 100.0 / static_cast<double>(r.n);
  CHECK(apg::certify_O_one_over_n2(t, apg::MinEstimate{c.min_h, 0.0}).status == Status::fail);
}

TEST_CASE("margins inside the oracle error bar are inconclusive") {
  CHECK(apg::margin_status(1e-9, 1e-10) == Status::pass);
  CHECK(apg::margin_status(-1e-9, 1e-10) == Status::fail);
  CHECK(apg::margin_status(5e-11, 1e-10) == Status::inconclusive);
  CHECK(apg::margin_status(0.0, 0.0) == Status::inconclusive);
}

TEST_CASE("per-step ledgers pass on real runs and catch tampering") {
  const LassoCase c = lasso(10, 1);
  auto cfg = config(apg::Algorithm::fista, ScheduleSpec::classical(), 2000);
  cfg.anchor = c.argmin;
  Trace t = apg::fista_run(c.problem, cfg);
  CHECK(apg::check_key_inequality(t).status == Status::pass);
  CHECK(apg::check_sigma_monotone(t).status == Status::pass);
  CHECK(apg::check_descent_ledger(t).status == Status::pass);
  CHECK(apg::check_lyapunov(t).status == Status::pass);
  CHECK(apg::check_fejer(t).status == Status::pass);
  CHECK(apg::check_mfista_h_monotone(t).status == Status::not_applicable);

  Trace bad = t;
  bad.records[10].sigma_n = bad.records[9].sigma_n + 1e-6;
  CHECK(apg::check_sigma_monotone(bad).status == Status::fail);
  bad = t;
  bad.records[20].key_residual = -1e-6;
  CHECK(apg::check_key_inequality(bad).status == Status::fail);
  CHECK(*apg::check_key_inequality(bad).location_n == 21);
  bad = t;
  *bad.records[30].lyapunov_E += 1e-3;
  CHECK(apg::check_lyapunov(bad).status == Status::fail);

  auto m = config(apg::Algorithm::mfista, ScheduleSpec::attouch_shifted(2), 2000);
  m.anchor = c.argmin;
  Trace mt = apg::mfista_run(c.problem, m);
  CHECK(apg::check_mfista_h_monotone(mt).status == Status::pass);
  CHECK(apg::check_mfista_one_step(mt).status == Status::pass);
  CHECK(apg::check_sigma_monotone(mt).status == Status::pass);
  CHECK(apg::check_lyapunov(mt).status == Status::pass);
  mt.records[5].h_xn = mt.records[4].h_xn + 1e-6;
  CHECK(apg::check_mfista_h_monotone(mt).status == Status::fail);
}

TEST_CASE("bounded-tau regime on ISTA") {
  const LassoCase c = lasso(10, 1);
  const Trace t = apg::ista_run(c.problem, config(apg::Algorithm::ista, ScheduleSpec::constant(1.0), 100000));
  const auto b = apg::certify_bounded_tau_rates(t, apg::MinEstimate{c.min_h, 0.0});
  CHECK(b.limits.status == Status::pass);
  CHECK(b.rate_o_n.status == Status::pass);
  CHECK(b.summable_steps.status == Status::pass);

  const Trace u = apg::ista_run(apg::unattained_problem<double>(),
                                config(apg::Algorithm::ista, ScheduleSpec::constant(1.0), 200000));
  const auto ub = apg::certify_bounded_tau_rates(u, apg::MinEstimate{0.0, 0.0});
  CHECK(ub.limits.status == Status::pass);
  CHECK(ub.rate_o_n.status == Status::not_applicable);
  CHECK(ub.summable_steps.status == Status::not_applicable);

  const Trace a = apg::ista_run(apg::affine_descent_problem<double>(),
                                config(apg::Algorithm::ista, ScheduleSpec::constant(1.0), 10000));
  CHECK(apg::certify_bounded_tau_rates(a, std::nullopt, -1000.0).limits.status == Status::pass);

  const Trace f = apg::fista_run(c.problem, config(apg::Algorithm::fista, ScheduleSpec::classical(), 100));
  CHECK(apg::certify_bounded_tau_rates(f, apg::MinEstimate{c.min_h, 0.0}).limits.status == Status::not_applicable);

  // A 1/n gap never satisfies the o(1/n) test.
  const Trace slow = [] {
    Trace s = synthetic_trace(10000, [](double n) { return 1.0 / n; });
    s.tau_infinity = 1.0;
    return s;
  }();
  CHECK(apg::certify_bounded_tau_rates(slow, apg::MinEstimate{0.0, 0.0}).rate_o_n.status == Status::fail);
}

TEST_CASE("scaled gap vanishes for MFISTA with the attouch schedule") {
  const LassoCase c = lasso(50, 1);
  const Trace t = apg::mfista_run(c.problem, config(apg::Algorithm::mfista, ScheduleSpec::attouch_shifted(2), 10000));
  CHECK(apg::certify_scaled_gap_vanishing(t, apg::MinEstimate{c.min_h, 0.0}).status == Status::pass);
}

TEST_CASE("divergence and liminf") {
  const Trace a = apg::fista_run(apg::affine_descent_problem<double>(),
                                 config(apg::Algorithm::fista, ScheduleSpec::classical(), 10000));
  CHECK(apg::certify_divergence(a).status == Status::pass);
  CHECK(apg::certify_liminf_inf(a, apg::ExtendedReal<double>::minus_infinity(), 0.0, -1e6).status == Status::pass);

  const Trace u = apg::fista_run(apg::unattained_problem<double>(),
                                 config(apg::Algorithm::fista, ScheduleSpec::classical(), 100000));
  CHECK(apg::certify_divergence(u).status == Status::pass);
  CHECK(u.records.back().h_xn < 1e-3);
  CHECK(apg::certify_liminf_inf(u, apg::ExtendedReal<double>(0.0), 1e-3, -1e6).status == Status::pass);

  const LassoCase c = lasso(10, 1);
  const Trace l = apg::fista_run(c.problem, config(apg::Algorithm::fista, ScheduleSpec::classical(), 1000));
  CHECK(apg::certify_divergence(l).status == Status::not_applicable);
  CHECK(apg::certify_liminf_inf(l, apg::ExtendedReal<double>(c.min_h), 1e-6, -1e6).status == Status::pass);

  // Flagged as divergent but the norm stays put.
  Trace flat = synthetic_trace(1000, [](double) { return 1.0; });
  flat.argmin_nonempty = false;
  for (auto& r : flat.records) r.x_norm = 5.0;
  CHECK(apg::certify_divergence(flat).status == Status::fail);
}

TEST_CASE("bounded iterates") {
  const LassoCase c = lasso(10, 1);
  const Trace t = apg::fista_run(c.problem, config(apg::Algorithm::fista, ScheduleSpec::chambolle_dossal(3), 10000));
  CHECK(apg::check_bounded_iterates(t).status == Status::pass);
}

TEST_CASE("sequence lemmas") {
  const auto inv_n2 = apg::sequence_lemma_evidence("1/n^2", [](double n) { return 1.0 / (n * n); }, 1000000);
  CHECK(inv_n2.summable);
  CHECK(inv_n2.n_alpha_vanishes);
  CHECK(inv_n2.weighted_diff_summable);
  CHECK(inv_n2.consistent());
  const auto inv_n = apg::sequence_lemma_evidence("1/n", [](double n) { return 1.0 / n; }, 1000000);
  CHECK_FALSE(inv_n.summable);
  CHECK_FALSE(inv_n.n_alpha_vanishes);
  CHECK(inv_n.consistent());
  for (const auto& [name, v] : apg::sequence_lemma_checks()) {
    CAPTURE(name);
    CHECK(v.ok());
  }
}

TEST_CASE("reports are pure functions of the trace") {
  const LassoCase c = lasso(10, 1);
  auto cfg = config(apg::Algorithm::fista, ScheduleSpec::classical(), 3000);
  cfg.anchor = c.argmin;
  const Trace t = apg::fista_run(c.problem, cfg);
  apg::ReportOptions o;
  o.min_h = apg::MinEstimate{c.min_h, 0.0};
  o.expect_rate = 1.9;
  const auto r1 = apg::build_report(t, o);
  const auto r2 = apg::build_report(t, o);
  CHECK(r1.to_json().dump() == r2.to_json().dump());
  CHECK(r1.ok());
  CHECK(r1.kappa == 2.0);
  REQUIRE(r1.beta_z);
  const auto j = r1.to_json();
  CHECK(j["verdicts"]["sigma_monotone"]["status"] == "pass");
  CHECK(j["verdicts"]["divergence_xnorm"]["status"] == "not-applicable");
  CHECK(j["verdicts"].contains("rate_O_n2"));
  CHECK(r1.to_text().find("keyineq") != std::string::npos);

  o.checks = {"keyineq"};
  CHECK(apg::build_report(t, o).verdicts.size() == 1);
}
