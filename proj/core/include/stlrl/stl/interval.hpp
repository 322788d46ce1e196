#pragma once

#include <limits>

namespace stlrl {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Absolute slack (seconds) used when testing whether a sampled time
/// difference falls inside an interval. Sample times are produced by
/// multiplying a step count with a step size, so exact endpoint hits can be
/// off by a few ulps.
inline constexpr double kTimeTolerance = 1e-9;

/// Closed interval [lo, hi] over non-negative seconds; hi may be +inf.
struct Interval {
  double lo = 0.0;
  double hi = kInfinity;

  /// Validates lo >= 0 and lo <= hi; throws std::invalid_argument.
  static Interval make(double lo, double hi);
  static Interval unbounded() { return {}; }

  bool bounded() const { return hi != kInfinity; }
  bool is_unbounded_default() const { return lo == 0.0 && hi == kInfinity; }
  bool contains(double d) const {
    return d >= lo - kTimeTolerance && d <= hi + kTimeTolerance;
  }

  friend bool operator==(const Interval&, const Interval&) = default;
};

}  // namespace stlrl
