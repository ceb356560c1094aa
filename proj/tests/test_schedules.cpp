#include <doctest.h>

#include <cmath>
#include <sstream>

#include "apg/harness/schedule_table.hpp"
#include "apg/schedules/analysis.hpp"
#include "oracles.hpp"

using apg::Schedule;
using apg::ScheduleSpec;

namespace {
const double kGolden = (1.0 + std::sqrt(5.0)) / 2.0;
}

TEST_CASE("classical recursion") {
  Schedule<double> s(ScheduleSpec::classical());
  CHECK(s.tau() == 1.0);
  CHECK(s.next_tau() == doctest::Approx(kGolden).epsilon(1e-15));
  CHECK(s.index() == 2);

  const auto taus = Schedule<double>::prefix(ScheduleSpec::classical(), 10000);
  const auto ref = oracle::classical_taus(10000);
  double worst = 0;
  for (std::size_t k = 0; k < taus.size(); ++k)
    worst = std::max(worst, std::abs(taus[k] - static_cast<double>(ref[k])) / static_cast<double>(ref[k]));
  CHECK(worst < 1e-13);
}

TEST_CASE("schedule copies iterate independently") {
  Schedule<double> a(ScheduleSpec::classical());
  a.next_tau();
  Schedule<double> b = a;
  a.next_tau();
  a.next_tau();
  CHECK(b.index() == 2);
  CHECK(b.next_tau() == Schedule<double>::prefix(ScheduleSpec::classical(), 3)[2]);
}

TEST_CASE("closed-form families") {
  const auto cd = Schedule<double>::prefix(ScheduleSpec::chambolle_dossal(3.0), 5);
  CHECK(cd[0] == 1.0);
  CHECK(cd[3] == doctest::Approx(6.0 / 3.0));
  const auto au = Schedule<double>::prefix(ScheduleSpec::aujol_dossal(5.0, 0.5), 4);
  CHECK(au[2] == doctest::Approx(std::sqrt(7.0 / 5.0)).epsilon(1e-15));
  const auto at = Schedule<double>::prefix(ScheduleSpec::attouch_shifted(2.0), 3);
  CHECK(at[0] == 1.0);
  CHECK(at[1] == doctest::Approx((kGolden + 1.0) / 2.0).epsilon(1e-15));
  const auto cu = Schedule<double>::prefix(ScheduleSpec::custom({1.0, 1.5, 2.0}), 5);
  CHECK(cu[4] == 2.0);
}

TEST_CASE("admissibility") {
  CHECK(apg::check_admissibility(Schedule<double>::prefix(ScheduleSpec::classical(), 10000)).admissible);
  CHECK(apg::check_admissibility(Schedule<double>::prefix(ScheduleSpec::constant(1.0), 100)).admissible);

  const auto bad = apg::check_admissibility({1.0, 3.0});
  CHECK_FALSE(bad.admissible);
  REQUIRE(bad.first_violation);
  CHECK(*bad.first_violation == 1);
  CHECK_FALSE(apg::check_admissibility({0.5, 0.6}).admissible);
  CHECK_FALSE(apg::check_admissibility({2.0, 1.5}).admissible);

  try {
    Schedule<double> s(ScheduleSpec::custom({1.0, 1.2, 3.0}));
    FAIL("expected AdmissibilityError");
  } catch (const apg::AdmissibilityError& e) {
    CHECK(e.index() == 2);
  }
}

TEST_CASE("parameter gates") {
  CHECK_THROWS_AS(Schedule<double>(ScheduleSpec::aujol_dossal(1.0, 1.0)), apg::AdmissibilityError);
  CHECK_NOTHROW(Schedule<double>(ScheduleSpec::aujol_dossal(2.5, 1.0)));
  CHECK_THROWS_AS(Schedule<double>(ScheduleSpec::chambolle_dossal(1.5)), apg::AdmissibilityError);
  CHECK_THROWS_AS(Schedule<double>(ScheduleSpec::constant(0.5)), apg::AdmissibilityError);
  CHECK_THROWS_AS(Schedule<double>(ScheduleSpec::custom({})), apg::AdmissibilityError);
  CHECK_THROWS_AS(apg::schedule_kind_from_string("nesterov"), apg::Error);
}

TEST_CASE("bracket consequences for the shipped families") {
  const ScheduleSpec specs[] = {ScheduleSpec::classical(),          ScheduleSpec::chambolle_dossal(2),
                                ScheduleSpec::chambolle_dossal(3),  ScheduleSpec::chambolle_dossal(5),
                                ScheduleSpec::aujol_dossal(5, 0.5), ScheduleSpec::attouch_shifted(2),
                                ScheduleSpec::constant(1)};
  for (const auto& spec : specs) {
    CAPTURE(spec.describe());
    const auto rep = apg::check_schedule_inequalities(Schedule<double>::prefix(spec, 100001));
    CHECK(rep.all_ok());
  }
  // The upper bracket is tight for the classical recursion.
  const auto rep = apg::check_schedule_inequalities(Schedule<double>::prefix(ScheduleSpec::classical(), 1000));
  CHECK(std::abs(rep.worst_upper) < 1e-12);
}

TEST_CASE("classical lower bound and growth") {
  const auto v = apg::classical_lower_bound_check(100000);
  CHECK(v.passed);
  CHECK(v.sup_n_over_tau <= 2.0);
  const auto taus = Schedule<double>::prefix(ScheduleSpec::classical(), 1000000);
  CHECK(taus[0] == (1.0 + 1.0) / 2.0);
  CHECK(std::abs(taus.back() / 1e6 - 0.5) < 1e-3);
}

TEST_CASE("folklore expansion") {
  const auto r = apg::folklore_expansion_check(100000);
  const double r2 = std::abs(r[99]), r3 = std::abs(r[999]), r4 = std::abs(r[9999]), r5 = std::abs(r[99999]);
  CHECK(r3 < r2);
  CHECK(r4 < r3);
  CHECK(r5 < r4);
  CHECK(r5 < 0.01);

  // Independent long double evaluation at n = 10^5.
  const auto t = oracle::classical_taus(100001);
  const long double n = 100000.0L;
  const long double ref = n * ((t[99999] - 1.0L) / t[100000] - 1.0L + 3.0L / n);
  CHECK(std::abs(r[99999] - static_cast<double>(ref)) < 1e-6);

  const auto d = apg::analyze_prefix(Schedule<double>::prefix(ScheduleSpec::classical(), 100001));
  CHECK(*std::max_element(d.alpha.begin(), d.alpha.end()) < 1.0);
  CHECK(*std::min_element(d.alpha.begin(), d.alpha.end()) >= 0.0);
}

TEST_CASE("chambolle_dossal quotient is (n - 1) / (n + 2) for rho = 2") {
  const auto d = apg::analyze_prefix(Schedule<double>::prefix(ScheduleSpec::chambolle_dossal(2), 1001));
  double worst = 0;
  for (std::size_t k = 0; k < d.alpha.size(); ++k) {
    const double n = static_cast<double>(k + 1);
    worst = std::max(worst, std::abs(d.alpha[k] - (n - 1) / (n + 2)));
  }
  CHECK(worst < 1e-15);
  CHECK(apg::chambolle_dossal_identity_residual(2, 100000) < 1e-12);
  CHECK(apg::chambolle_dossal_identity_residual(5, 100000) < 1e-12);
}

TEST_CASE("attouch condition delta") {
  const double attouch = apg::attouch_condition_delta(Schedule<double>::prefix(ScheduleSpec::attouch_shifted(2), 100001));
  CHECK(attouch <= (1 + std::sqrt(5.0)) / 4 + 1e-12);
  CHECK(attouch > 0.5);
  const double aujol = apg::attouch_condition_delta(Schedule<double>::prefix(ScheduleSpec::aujol_dossal(5, 0.5), 100001));
  CHECK(aujol <= 1 / std::sqrt(5.0) + 1e-12);
  CHECK(apg::attouch_condition_delta(Schedule<double>::prefix(ScheduleSpec::constant(1.7), 100)) == 0.0);
  // Classical sits at the boundary delta -> 1.
  CHECK(apg::attouch_condition_delta(Schedule<double>::prefix(ScheduleSpec::classical(), 10000)) > 0.99);
}

TEST_CASE("blow-up partial sums") {
  CHECK(apg::blowsup_partial_sums(Schedule<double>::prefix(ScheduleSpec::constant(1.0), 10000)) == 0.0);
  CHECK(apg::blowsup_partial_sums(Schedule<double>::prefix(ScheduleSpec::classical(), 10000)) > 5.0);
  CHECK(apg::blowsup_partial_sums(Schedule<double>::prefix(ScheduleSpec::chambolle_dossal(2), 10000)) > 5.0);
}

TEST_CASE("quotient bounds") {
  CHECK(apg::quotient_bounds_check(Schedule<double>::prefix(ScheduleSpec::classical(), 10000), std::nullopt).passed);
  const auto bounded = apg::quotient_bounds_check(Schedule<double>::prefix(ScheduleSpec::constant(3.0), 1000), 3.0);
  CHECK(bounded.passed);
  CHECK(bounded.limit_checked);
}

TEST_CASE("kappa and tau_infinity") {
  CHECK(*Schedule<double>(ScheduleSpec::classical()).kappa_bound() == 2.0);
  CHECK(*Schedule<double>(ScheduleSpec::chambolle_dossal(3)).kappa_bound() == 3.0);
  CHECK_FALSE(Schedule<double>(ScheduleSpec::aujol_dossal(5, 0.5)).kappa_bound());
  CHECK_FALSE(Schedule<double>(ScheduleSpec::classical()).tau_infinity());
  CHECK(*Schedule<double>(ScheduleSpec::constant(2.0)).tau_infinity() == 2.0);
  // The realized sup n / tau_n stays below the analytic bound.
  const auto d = apg::analyze_prefix(Schedule<double>::prefix(ScheduleSpec::attouch_shifted(2), 10001));
  CHECK(d.sup_n_over_tau.back() <= 4.0);
}

TEST_CASE("schedule table") {
  std::ostringstream out, err;
  CHECK(apg::cmd_schedule(ScheduleSpec::classical(), 20, out, err) == 0);
  std::istringstream lines(out.str());
  std::string line;
  int rows = 0;
  std::string second;
  while (std::getline(lines, line)) {
    if (line.empty() || line[0] == '#' || line[0] == 'n') continue;
    ++rows;
    if (rows == 2) second = line;
  }
  CHECK(rows == 20);
  CHECK(second.rfind("2\t1.618033988749895\t", 0) == 0);

  std::ostringstream out2, err2;
  CHECK(apg::cmd_schedule(ScheduleSpec::aujol_dossal(1, 1), 20, out2, err2) == 3);
  CHECK(err2.str().find("a > max") != std::string::npos);

  std::ostringstream out3, err3;
  CHECK(apg::cmd_schedule(ScheduleSpec::chambolle_dossal(2), 10, out3, err3) == 0);
  CHECK(out3.str().find("\n4\t2.5\t0.5\t") != std::string::npos);  // alpha_4 = 3/6
}
