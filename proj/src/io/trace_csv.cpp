#include "apg/io/trace_csv.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace apg {

std::string format_double(double x) {
  char buf[64];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x);
  if (ec != std::errc()) throw InvalidArgument("format_double: conversion failed");
  return std::string(buf, end);
}

void write_trace_csv(std::ostream& os, const SolverTrace<double>& trace) {
  os << kTraceCsvHeader << '\n';
  for (const auto& r : trace.records) {
    os << r.n << ',' << format_double(r.tau_n) << ',' << format_double(r.alpha_n) << ','
       << format_double(r.h_xn) << ',' << format_double(r.sigma_n) << ','
       << format_double(r.step_norm) << ',' << format_double(r.x_norm) << ',';
    if (r.key_residual) os << format_double(*r.key_residual);
    os << ',';
    if (r.lyapunov_E) os << format_double(*r.lyapunov_E);
    os << '\n';
  }
}

void write_trace_csv(const std::string& path, const SolverTrace<double>& trace) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write " + path);
  write_trace_csv(out, trace);
  if (!out) throw ConfigError("write failed for " + path);
}

namespace {

double parse_double(const std::string& s, const std::string& where) {
  double v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size())
    throw ConfigError("malformed number '" + s + "' in " + where);
  return v;
}

std::optional<double> parse_optional(const std::string& s, const std::string& where) {
  if (s.empty()) return std::nullopt;
  return parse_double(s, where);
}

}  // namespace

std::vector<TraceRow> read_trace_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open " + path);
  std::string line;
  if (!std::getline(in, line) || line != kTraceCsvHeader)
    throw ConfigError(path + ": unexpected header");
  std::vector<TraceRow> rows;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) f.push_back(cell);
    if (!line.empty() && line.back() == ',') f.emplace_back();
    const std::string where = path + ":" + std::to_string(lineno);
    if (f.size() != 9) throw ConfigError(where + ": expected 9 fields");
    TraceRow r;
    r.n = static_cast<std::size_t>(parse_double(f[0], where));
    r.tau_n = parse_double(f[1], where);
    r.alpha_n = parse_double(f[2], where);
    r.h_xn = parse_double(f[3], where);
    r.sigma_n = parse_double(f[4], where);
    r.step_norm = parse_double(f[5], where);
    r.x_norm = parse_double(f[6], where);
    r.key_residual = parse_optional(f[7], where);
    r.lyapunov_E = parse_optional(f[8], where);
    rows.push_back(r);
  }
  return rows;
}

}  // namespace apg
