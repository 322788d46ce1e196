#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <vector>

#include "stlrl/robustness/trace.hpp"
#include "stlrl/stl/formula.hpp"

namespace stlrl {

/// Extended real: +inf / -inf are valid robustness values.
using Robustness = double;

struct RobustnessOptions {
  /// Robustness magnitude of a boolean signal (+kappa when true, -kappa when false).
  double bool_magnitude = 1.0;
};

/// The formula needs samples beyond the end of the trace at the requested index.
class InsufficientTrace : public std::runtime_error {
 public:
  InsufficientTrace(std::size_t index, const std::string& what);
  std::size_t index() const { return index_; }

 private:
  std::size_t index_;
};

/// Robustness at every index of `trace`; std::nullopt where the formula
/// would need samples past the end of the trace.
std::vector<std::optional<Robustness>> robustness_series(const Formula& f, const Trace& trace,
                                                         const RobustnessOptions& options = {});

/// Boolean verdicts at every index; std::nullopt where not evaluable.
std::vector<std::optional<bool>> satisfaction_series(const Formula& f, const Trace& trace);

/// Satisfaction of `f` at sample `n`. Throws InsufficientTrace or
/// std::out_of_range.
bool eval_bool(const Formula& f, const Trace& trace, std::size_t n);

/// Robustness of `f` at sample `n`. Throws InsufficientTrace or std::out_of_range.
Robustness eval_rob(const Formula& f, const Trace& trace, std::size_t n,
                    const RobustnessOptions& options = {});

struct GlobalMinimum {
  Robustness value = kInfinity;
  std::optional<std::size_t> index;  // earliest index attaining `value`
};

/// Minimum robustness over every evaluable sample; for a past-dependent
/// formula this is the robustness of `G f` on the trace.
GlobalMinimum global_min_rob(const Formula& f, const Trace& trace,
                             const RobustnessOptions& options = {});

}  // namespace stlrl
