#include "stlrl/system/system_model.hpp"

#include <algorithm>
#include <cmath>

namespace stlrl {

InputSignal::InputSignal(double dt, std::size_t channels) : dt_(dt), channels_(channels) {
  if (!(dt > 0.0)) throw std::invalid_argument("input step must be positive");
}

void InputSignal::push_back(std::span<const double> u) {
  if (u.size() != channels_) {
    throw std::invalid_argument("input has " + std::to_string(u.size()) + " channels, expected " +
                                std::to_string(channels_));
  }
  data_.insert(data_.end(), u.begin(), u.end());
}

std::span<const double> InputSignal::value_at(double t) const {
  if (empty() || t < 0.0) throw std::out_of_range("input signal has no value at this time");
  auto k = static_cast<std::size_t>(std::floor(t / dt_ + 1e-9));
  return at(std::min(k, size() - 1));
}

InputSignal InputSignal::prefix(std::size_t count) const {
  InputSignal out(dt_, channels_);
  count = std::min(count, size());
  out.data_.assign(data_.begin(), data_.begin() + static_cast<std::ptrdiff_t>(count * channels_));
  return out;
}

Trace run_signal(SystemModel& model, const InputSignal& u) {
  if (u.channels() != model.input_schema().size()) {
    throw std::invalid_argument("input signal has " + std::to_string(u.channels()) +
                                " channels, model expects " +
                                std::to_string(model.input_schema().size()));
  }
  Trace trace(model.output_schema());
  trace.push_back(0.0, model.reset());
  for (std::size_t k = 0; k < u.size(); ++k) {
    auto x = model.step(u.at(k), u.dt());
    trace.push_back(u.time(k + 1), x);
  }
  return trace;
}

namespace {

SignalSchema mirror_schema(const SignalSchema& outputs) {
  SignalSchema in;
  for (const auto& s : outputs.signals()) in.add(s.name, SignalKind::Real);
  return in;
}

SignalSchema numbered(std::size_t channels, const char* prefix) {
  SignalSchema s;
  for (std::size_t i = 0; i < channels; ++i) s.add(prefix + std::to_string(i), SignalKind::Real);
  return s;
}

}  // namespace

EchoModel::EchoModel(SignalSchema outputs, std::vector<InputBound> bounds)
    : inputs_(mirror_schema(outputs)), outputs_(std::move(outputs)), bounds_(std::move(bounds)) {
  if (bounds_.size() != outputs_.size()) {
    throw std::invalid_argument("echo model needs one bound per channel");
  }
}

EchoModel::EchoModel(std::size_t channels, InputBound bound)
    : inputs_(numbered(channels, "u")),
      outputs_(numbered(channels, "y")),
      bounds_(channels, bound) {}

std::vector<double> EchoModel::reset() { return std::vector<double>(outputs_.size(), 0.0); }

std::vector<double> EchoModel::step(std::span<const double> u, double dt) {
  if (!(dt > 0.0)) throw ModelError("echo model: step size must be positive");
  if (u.size() != outputs_.size()) throw ModelError("echo model: wrong input width");
  return {u.begin(), u.end()};
}

}  // namespace stlrl
