#pragma once

#include <functional>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "stlrl/robustness/trace.hpp"
#include "stlrl/stl/schema.hpp"
#include "stlrl/system/input_signal.hpp"

namespace stlrl {

struct InputBound {
  double lo = 0.0;
  double hi = 1.0;

  double clamp(double x) const { return x < lo ? lo : (x > hi ? hi : x); }
  bool contains(double x) const { return x >= lo && x <= hi; }

  friend bool operator==(const InputBound&, const InputBound&) = default;
};

/// Failure of a system under test; aborts the running episode.
class ModelError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A causal, deterministic system under test: reset to the initial output
/// state, then advance by one input step at a time.
class SystemModel {
 public:
  virtual ~SystemModel() = default;

  virtual const SignalSchema& input_schema() const = 0;
  virtual const SignalSchema& output_schema() const = 0;
  virtual const std::vector<InputBound>& input_bounds() const = 0;
  /// Typical range of each output signal, for agents that discretize
  /// observations. Empty when unknown.
  virtual std::vector<InputBound> output_ranges() const { return {}; }

  virtual std::vector<double> reset() = 0;
  /// Applies `u` for `dt` seconds and returns the output state at the end.
  virtual std::vector<double> step(std::span<const double> u, double dt) = 0;
};

/// Creates a fresh model for a given input step. Used wherever independent
/// instances are needed (one per trial, one per dt).
using ModelFactory = std::function<std::unique_ptr<SystemModel>(double dt)>;

/// Simulates `u` from reset. Sample 0 is the reset state at t = 0 and sample
/// k + 1 the state after applying step k for dt, so the trace has
/// u.size() + 1 samples.
Trace run_signal(SystemModel& model, const InputSignal& u);

/// Output = input. The input schema mirrors `outputs` (all real).
class EchoModel final : public SystemModel {
 public:
  EchoModel(SignalSchema outputs, std::vector<InputBound> bounds);
  explicit EchoModel(std::size_t channels, InputBound bound = {});

  const SignalSchema& input_schema() const override { return inputs_; }
  const SignalSchema& output_schema() const override { return outputs_; }
  const std::vector<InputBound>& input_bounds() const override { return bounds_; }
  std::vector<InputBound> output_ranges() const override { return bounds_; }

  std::vector<double> reset() override;
  std::vector<double> step(std::span<const double> u, double dt) override;

 private:
  SignalSchema inputs_;
  SignalSchema outputs_;
  std::vector<InputBound> bounds_;
};

}  // namespace stlrl
