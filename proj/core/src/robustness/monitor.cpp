#include "stlrl/robustness/monitor.hpp"

#include <algorithm>
#include <cmath>

namespace stlrl {

Monitor::Monitor(Formula property, SignalSchema schema, RobustnessOptions options, bool evict)
    : property_(std::move(property)),
      options_(options),
      history_(past_reach(property_)),
      evict_(evict),
      window_(std::move(schema)) {
  if (!is_past_dependent(property_)) {
    throw std::invalid_argument("monitor needs a past-dependent formula, got " +
                                to_string(property_));
  }
}

Robustness Monitor::push(double time, std::span<const double> state) {
  if (!window_.empty()) {
    if (!(time > window_.times().back())) {
      throw std::invalid_argument("monitor timestamps must strictly increase (got " +
                                  format_number(time) + " after " +
                                  format_number(window_.times().back()) + ")");
    }
    max_gap_ = std::max(max_gap_, time - window_.times().back());
  }
  window_.push_back(time, state);
  ++pushed_;
  Robustness rho = eval_rob(property_, window_, window_.size() - 1, options_);
  if (evict_) evict_old(time);
  return rho;
}

void Monitor::clear() {
  window_ = Trace(window_.schema());
  max_gap_ = 0.0;
  pushed_ = 0;
}

// Every sample the newest verdict can depend on lies within
// history_.seconds + history_.steps * max_gap of the newest time; one
// older sample is kept as slack for the interval tolerance.
void Monitor::evict_old(double now) {
  if (!history_.finite()) return;
  const double span = history_.seconds + static_cast<double>(history_.steps) * max_gap_;
  const double horizon = now - span - 2 * kTimeTolerance;
  const auto& t = window_.times();
  auto keep = std::partition_point(t.begin(), t.end(), [&](double x) { return x < horizon; });
  auto drop = static_cast<std::size_t>(keep - t.begin());
  if (drop > 1) window_.pop_front(drop - 1);
}

}  // namespace stlrl
