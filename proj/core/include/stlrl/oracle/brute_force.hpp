#pragma once

#include <cstddef>
#include <optional>

#include "stlrl/robustness/trace.hpp"
#include "stlrl/stl/formula.hpp"

namespace stlrl::oracle {

/// Reference evaluator for cross-checking the monitor and the offline
/// evaluator. It rewrites every derived operator into true/U/S/!/&/| form
/// and evaluates the definitions literally, materializing each quantified
/// index set. Exponential in formula depth; meant for short traces.
///
/// Returns std::nullopt when the formula needs samples past the end of the trace.
std::optional<double> robustness(const Formula& f, const Trace& trace, std::size_t n,
                                 double bool_magnitude = 1.0);
std::optional<bool> satisfied(const Formula& f, const Trace& trace, std::size_t n);

/// The same formula with Implies, Always, Eventually, Historically, Once,
/// `>` and `>=` expanded away.
Formula normalize(const Formula& f);

}  // namespace stlrl::oracle
