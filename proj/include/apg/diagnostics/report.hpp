#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "apg/diagnostics/certify.hpp"
#include "apg/diagnostics/fit_rate.hpp"

namespace apg {

struct ReportOptions {
  /// Reference minimum (catalog value or oracle), with its error bar.
  std::optional<MinEstimate> min_h;
  /// Target of the running-minimum check; defaults to the trace's known inf, then min_h.
  std::optional<ExtendedReal<double>> lower_bound;
  /// Running min must go below this when inf h = -inf.
  double liminf_threshold{-1e6};
  /// Tolerance of the running-minimum check when no certified rate applies.
  double liminf_tol{1e-2};
  /// Minimum fitted exponent; the fitted_rate check runs only when set.
  std::optional<double> expect_rate;
  /// Subset of checks to run; empty runs all of them.
  std::vector<std::string> checks;
};

struct DiagnosticsReport {
  std::vector<std::pair<std::string, Verdict>> verdicts;
  std::optional<RateFit> fitted_rate;
  double kappa{0};
  std::optional<double> beta_z;
  std::optional<MinEstimate> min_h;

  /// Every non-exploratory verdict is pass or not-applicable.
  bool ok() const;
  const Verdict* find(const std::string& name) const;
  std::string to_text() const;
  nlohmann::ordered_json to_json() const;
};

/// Names accepted in ReportOptions::checks, in report order.
const std::vector<std::string>& check_names();

/// Runs the selected checks. A pure function of its inputs.
DiagnosticsReport build_report(const Trace& trace, const ReportOptions& options = {});

}  // namespace apg
