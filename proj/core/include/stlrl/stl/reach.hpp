#pragma once

#include <cstddef>

#include "stlrl/stl/formula.hpp"
#include "stlrl/stl/parser.hpp"

namespace stlrl {

/// How far (forward or backward) from an instant a formula looks: a number
/// of seconds plus a number of sample steps contributed by X / P.
struct Reach {
  double seconds = 0.0;
  std::size_t steps = 0;

  bool finite() const { return seconds != kInfinity; }
  bool zero() const { return seconds == 0.0 && steps == 0; }
  /// Reach in seconds once the sampling step is known.
  double resolve(double dt) const { return seconds + static_cast<double>(steps) * dt; }

  friend bool operator==(const Reach&, const Reach&) = default;
};

/// Future reach (horizon): how far ahead the verdict at an instant depends.
Reach future_reach(const Formula& f);

/// Past reach (history): how far back the verdict at an instant depends.
Reach past_reach(const Formula& f);

/// True when future_reach(f) is zero, i.e. the verdict at an instant only
/// depends on the prefix up to that instant.
bool is_past_dependent(const Formula& f);

/// Rewrites `G phi` into the equivalent past-dependent `G H[h,h] phi`
/// where h = future_reach(phi). Sample-step components of h are shifted
/// with `P` instead of a seconds interval. Returns the input unchanged when
/// it is already past-dependent; throws std::invalid_argument on an
/// unbounded future reach.
LifeLongProperty to_past_dependent(const LifeLongProperty& psi);

/// As above for traces sampled every `dt` seconds: sample steps are folded
/// into the H interval, so early instants see an empty window instead of
/// P at index 0.
LifeLongProperty to_past_dependent(const LifeLongProperty& psi, double dt);

}  // namespace stlrl
