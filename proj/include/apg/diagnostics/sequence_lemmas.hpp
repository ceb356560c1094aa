#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "apg/diagnostics/verdict.hpp"
#include "apg/schedules/schedule.hpp"

namespace apg {

/// Finite-prefix reading of a decreasing positive sequence (alpha_n), n = 2..n_max.
struct SequenceLemmaEvidence {
  std::string name;
  bool summable{false};          ///< sum alpha_n settles
  bool n_alpha_vanishes{false};  ///< n alpha_n -> 0
  bool weighted_diff_summable{false};  ///< sum n (alpha_n - alpha_{n+1}) settles
  double partial_sum{0};
  double last_n_alpha{0};
  double weighted_diff_sum{0};

  /// summable <=> (n alpha_n -> 0 and sum n (alpha_n - alpha_{n+1}) < inf).
  bool consistent() const { return summable == (n_alpha_vanishes && weighted_diff_summable); }
};

/// A series is read as settling when its last decade increment is at most `ratio` times
/// the previous one; n alpha_n vanishes when its last decade max is at most `ratio` times
/// the previous decade max.
SequenceLemmaEvidence sequence_lemma_evidence(const std::string& name,
                                              const std::function<double(double)>& alpha,
                                              std::size_t n_max, double ratio = 0.9);

/// Verdicts for 1/n^2, 1/n, 1/(n log^2 n) and the blow-up partial sum of the given schedule.
std::vector<std::pair<std::string, Verdict>> sequence_lemma_checks(
    const ScheduleSpec& schedule = ScheduleSpec::classical(), std::size_t n_max = 1000000,
    std::size_t blowsup_prefix = 10000, double blowsup_bound = 5.0);

}  // namespace apg
