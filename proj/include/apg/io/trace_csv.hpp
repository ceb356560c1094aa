#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "apg/solvers/trace.hpp"

namespace apg {

inline constexpr const char* kTraceCsvHeader =
    "n,tau_n,alpha_n,h_xn,sigma_n,step_norm,x_norm,key_residual,lyapunov_E";

/// Shortest decimal string that reads back to the same double.
std::string format_double(double x);

void write_trace_csv(std::ostream& os, const SolverTrace<double>& trace);
void write_trace_csv(const std::string& path, const SolverTrace<double>& trace);

/// A CSV row as read back; missing optionals stay empty.
struct TraceRow {
  std::size_t n{0};
  double tau_n{0};
  double alpha_n{0};
  double h_xn{0};
  double sigma_n{0};
  double step_norm{0};
  double x_norm{0};
  std::optional<double> key_residual;
  std::optional<double> lyapunov_E;
};

/// Throws ConfigError on an unreadable file, a wrong header or a malformed row.
std::vector<TraceRow> read_trace_csv(const std::string& path);

}  // namespace apg
