#pragma once

#include <cstddef>
#include <span>

#include "stlrl/robustness/evaluator.hpp"
#include "stlrl/stl/reach.hpp"

namespace stlrl {

/// Incremental robustness of a past-dependent formula. Each push returns
/// the robustness at the newest sample, which depends only on the prefix,
/// so samples older than the formula's past reach are evicted.
///
/// Single owner: pushes must not run concurrently.
class Monitor {
 public:
  /// Throws std::invalid_argument if `property` is not past-dependent.
  Monitor(Formula property, SignalSchema schema, RobustnessOptions options = {},
          bool evict = true);

  /// Throws std::invalid_argument on a non-increasing timestamp.
  Robustness push(double time, std::span<const double> state);

  void clear();

  const Formula& property() const { return property_; }
  std::size_t pushed() const { return pushed_; }
  std::size_t retained() const { return window_.size(); }
  const Trace& window() const { return window_; }

 private:
  void evict_old(double now);

  Formula property_;
  RobustnessOptions options_;
  Reach history_;
  bool evict_;
  Trace window_;
  double max_gap_ = 0.0;
  std::size_t pushed_ = 0;
};

}  // namespace stlrl
