#pragma once

#include <cmath>

#include "stlrl/robustness/evaluator.hpp"

namespace stlrl {

/// Largest reward handed to an agent; reached when robustness is -inf.
inline const double kRewardCap = std::expm1(40.0);

/// Discount of the falsification objective (sum of rewards).
inline constexpr double kRewardDiscount = 1.0;

/// exp(-rho) - 1, capped at kRewardCap. Decreasing in rho; -1 at +inf.
inline double reward(Robustness rho) {
  if (rho <= -40.0) return kRewardCap;
  return std::expm1(-rho) + 0.0;  // + 0.0 turns -0 into 0
}

}  // namespace stlrl
