#pragma once

#include <cmath>
#include <limits>
#include <ostream>
#include <string>

#include "apg/core/errors.hpp"

namespace apg {

/// A real number or one of the two infinities. Infinities are carried as a tag, never
/// as an IEEE infinity inside arithmetic.
template <typename Scalar>
class ExtendedReal {
 public:
  enum class Kind { finite, plus_infinity, minus_infinity };

  // NOLINTNEXTLINE(google-explicit-constructor)
  ExtendedReal(Scalar value) : kind_(Kind::finite), value_(value) {
    using std::isfinite;
    if (!isfinite(value)) throw DomainError("ExtendedReal built from a non-finite float");
  }

  static ExtendedReal plus_infinity() { return ExtendedReal(Kind::plus_infinity); }
  static ExtendedReal minus_infinity() { return ExtendedReal(Kind::minus_infinity); }

  Kind kind() const noexcept { return kind_; }
  bool is_finite() const noexcept { return kind_ == Kind::finite; }
  bool is_plus_infinity() const noexcept { return kind_ == Kind::plus_infinity; }
  bool is_minus_infinity() const noexcept { return kind_ == Kind::minus_infinity; }

  Scalar value() const {
    if (!is_finite()) throw DomainError("value() on an infinite extended real");
    return value_;
  }

  friend ExtendedReal operator+(const ExtendedReal& a, const ExtendedReal& b) {
    if (a.is_finite() && b.is_finite()) return ExtendedReal(a.value_ + b.value_);
    if ((a.is_plus_infinity() && b.is_minus_infinity()) ||
        (a.is_minus_infinity() && b.is_plus_infinity()))
      throw DomainError("+inf + -inf is undefined");
    return a.is_finite() ? b : a;
  }

  friend bool operator==(const ExtendedReal& a, const ExtendedReal& b) {
    if (a.kind_ != b.kind_) return false;
    return !a.is_finite() || a.value_ == b.value_;
  }

  friend bool operator<(const ExtendedReal& a, const ExtendedReal& b) {
    if (a.kind_ == b.kind_) return a.is_finite() && a.value_ < b.value_;
    return a.is_minus_infinity() || b.is_plus_infinity();
  }
  friend bool operator<=(const ExtendedReal& a, const ExtendedReal& b) { return !(b < a); }
  friend bool operator>(const ExtendedReal& a, const ExtendedReal& b) { return b < a; }
  friend bool operator>=(const ExtendedReal& a, const ExtendedReal& b) { return !(a < b); }

  std::string to_string() const {
    switch (kind_) {
      case Kind::plus_infinity:
        return "+inf";
      case Kind::minus_infinity:
        return "-inf";
      default:
        return std::to_string(static_cast<double>(value_));
    }
  }

  friend std::ostream& operator<<(std::ostream& os, const ExtendedReal& x) {
    if (x.is_finite()) return os << x.value_;
    return os << x.to_string();
  }

 private:
  explicit ExtendedReal(Kind kind) : kind_(kind), value_(0) {}

  Kind kind_;
  Scalar value_;
};

}  // namespace apg
