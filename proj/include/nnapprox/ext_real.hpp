#pragma once

#include <cmath>
#include <limits>
#include <string>

#include "nnapprox/errors.hpp"

namespace nnapprox {

// Value in [0, inf].  Infinity is a tagged state, not a floating-point
// sentinel, so "infinite" survives serialisation and arithmetic untouched.
class ExtReal {
 public:
  constexpr ExtReal() : value_(0.0), infinite_(false) {}

  // Finite constructor; rejects NaN and IEEE infinities.
  ExtReal(double v) : value_(v), infinite_(false) {
    if (!std::isfinite(v)) throw precondition_error("ExtReal: finite constructor given non-finite value");
  }

  static constexpr ExtReal infinity() {
    ExtReal r;
    r.infinite_ = true;
    return r;
  }

  constexpr bool is_infinite() const { return infinite_; }
  constexpr bool is_finite() const { return !infinite_; }

  double finite_value() const {
    if (infinite_) throw precondition_error("ExtReal: finite_value() on infinity");
    return value_;
  }

  // Lossy view for display and comparisons against plain doubles.
  constexpr double as_double() const {
    return infinite_ ? std::numeric_limits<double>::infinity() : value_;
  }

  friend constexpr bool operator==(const ExtReal& a, const ExtReal& b) {
    if (a.infinite_ || b.infinite_) return a.infinite_ && b.infinite_;
    return a.value_ == b.value_;
  }
  friend constexpr bool operator<(const ExtReal& a, const ExtReal& b) {
    if (a.infinite_) return false;
    if (b.infinite_) return true;
    return a.value_ < b.value_;
  }
  friend constexpr bool operator<=(const ExtReal& a, const ExtReal& b) { return a == b || a < b; }
  friend constexpr bool operator>(const ExtReal& a, const ExtReal& b) { return b < a; }
  friend constexpr bool operator>=(const ExtReal& a, const ExtReal& b) { return b <= a; }

  std::string to_string() const {
    if (infinite_) return "inf";
    return std::to_string(value_);
  }

 private:
  double value_;
  bool infinite_;
};

// Wraps a computed double, saturating IEEE overflow into the tagged state.
inline ExtReal ext_from_computed(double v) {
  if (std::isnan(v)) throw evaluation_error("ext_from_computed: NaN");
  if (std::isinf(v)) return ExtReal::infinity();
  return ExtReal(v);
}

}  // namespace nnapprox
