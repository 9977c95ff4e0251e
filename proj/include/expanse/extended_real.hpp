#pragma once

#include <compare>
#include <limits>
#include <string>

#include "expanse/errors.hpp"

namespace expanse {

/// A nonnegative horizon that may be +infinity.
///
/// Horizons (T₀, S₀, A over an unbounded window) are reported through this
/// type so that callers never see a sentinel float.
class ExtendedReal {
 public:
  static ExtendedReal finite(double v) { return ExtendedReal(v, false); }
  static ExtendedReal infinity() { return ExtendedReal(0.0, true); }

  [[nodiscard]] bool is_infinite() const { return infinite_; }
  [[nodiscard]] bool is_finite() const { return !infinite_; }

  /// Finite value; throws DomainError when infinite.
  [[nodiscard]] double value() const {
    if (infinite_) throw DomainError("ExtendedReal::value() on an infinite quantity");
    return value_;
  }

  /// IEEE view, +inf for the infinite case. Internal arithmetic only.
  [[nodiscard]] double as_double() const {
    return infinite_ ? std::numeric_limits<double>::infinity() : value_;
  }

  /// True when x lies strictly below the horizon.
  [[nodiscard]] bool exceeds(double x) const { return infinite_ || x < value_; }

  [[nodiscard]] std::string to_string() const;

  friend bool operator==(const ExtendedReal& a, const ExtendedReal& b) {
    return a.infinite_ == b.infinite_ && (a.infinite_ || a.value_ == b.value_);
  }

 private:
  ExtendedReal(double v, bool inf) : value_(v), infinite_(inf) {}
  double value_;
  bool infinite_;
};

/// Shortest round-trip formatting used across text outputs ("inf" for infinity).
std::string format_double(double v);

inline std::string ExtendedReal::to_string() const {
  return infinite_ ? std::string("inf") : format_double(value_);
}

}  // namespace expanse
