#pragma once

#include <cstddef>
#include <optional>
#include <string>

namespace apg {

enum class Status { pass, fail, not_applicable, inconclusive };

inline std::string to_string(Status s) {
  switch (s) {
    case Status::pass:
      return "pass";
    case Status::fail:
      return "fail";
    case Status::not_applicable:
      return "not-applicable";
    case Status::inconclusive:
      return "inconclusive";
  }
  return "unknown";
}

/// Outcome of one named check. `worst_residual` is the largest observed lhs - rhs of the
/// monitored inequality (negative means slack everywhere), or the check's own summary
/// statistic where noted.
struct Verdict {
  Status status{Status::not_applicable};
  double worst_residual{0};
  std::optional<std::size_t> location_n;
  std::string note;
  /// Evidence only; never affects exit codes.
  bool exploratory{false};

  bool ok() const { return exploratory || status == Status::pass || status == Status::not_applicable; }

  static Verdict not_applicable(std::string why) {
    Verdict v;
    v.note = std::move(why);
    return v;
  }
};

/// Verdict for a margin that must be positive, given an oracle error bar: pass above the
/// bar, fail below its negative, inconclusive inside.
inline Status margin_status(double worst_margin, double error_bar) {
  if (worst_margin > error_bar) return Status::pass;
  if (worst_margin < -error_bar) return Status::fail;
  return Status::inconclusive;
}

}  // namespace apg
