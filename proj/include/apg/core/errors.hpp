#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace apg {

/// Base of every structured error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionMismatch : public Error {
 public:
  DimensionMismatch(std::ptrdiff_t expected, std::ptrdiff_t actual)
      : Error("dimension mismatch: expected " + std::to_string(expected) + ", got " +
              std::to_string(actual)),
        expected_(expected),
        actual_(actual) {}

  std::ptrdiff_t expected() const noexcept { return expected_; }
  std::ptrdiff_t actual() const noexcept { return actual_; }

 private:
  std::ptrdiff_t expected_;
  std::ptrdiff_t actual_;
};

/// A point or value lies outside the domain an operation requires.
class DomainError : public Error {
 public:
  using Error::Error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// An iterative proximal solve did not reach its tolerance.
class ProxError : public Error {
 public:
  ProxError(const std::string& what, double residual)
      : Error(what + " (inner residual " + std::to_string(residual) + ")"), residual_(residual) {}

  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

/// A momentum schedule violates tau_1 >= 1 or the bracket
/// tau_n <= tau_{n+1} <= (1 + sqrt(1 + 4 tau_n^2)) / 2, or its parameters are out of range.
class AdmissibilityError : public Error {
 public:
  explicit AdmissibilityError(const std::string& what, std::ptrdiff_t index = -1)
      : Error(what), index_(index) {}

  /// Zero-based index of the first offending element, or -1 for a parameter error.
  std::ptrdiff_t index() const noexcept { return index_; }

 private:
  std::ptrdiff_t index_;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

/// The two reference-minimum estimates disagree beyond the accepted error bar.
class OracleUnreliable : public Error {
 public:
  OracleUnreliable(const std::string& what, double disagreement)
      : Error(what), disagreement_(disagreement) {}

  double disagreement() const noexcept { return disagreement_; }

 private:
  double disagreement_;
};

}  // namespace apg
