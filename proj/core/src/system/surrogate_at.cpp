#include "stlrl/system/surrogate_at.hpp"

#include <cmath>

#include <spdlog/spdlog.h>

namespace stlrl {

SignalSchema SurrogateAt::default_output_schema() {
  SignalSchema s;
  s.add("v", SignalKind::Real);
  s.add("w", SignalKind::Real);
  s.add("g", SignalKind::Real);
  s.add("g1", SignalKind::Bool);
  s.add("g2", SignalKind::Bool);
  s.add("g3", SignalKind::Bool);
  s.add("g4", SignalKind::Bool);
  return s;
}

SurrogateAt::SurrogateAt(SurrogateAtParams params)
    : params_(params),
      outputs_(default_output_schema()),
      bounds_{params.throttle, params.brake} {
  if (!(params_.integrator_step > 0.0)) {
    throw std::invalid_argument("integrator step must be positive");
  }
  inputs_.add("throttle", SignalKind::Real);
  inputs_.add("brake", SignalKind::Real);
  reset();
}

std::vector<InputBound> SurrogateAt::output_ranges() const {
  const auto& p = params_;
  double vmax = p.throttle_gain * p.throttle.hi * p.ratios.back() / p.drag;
  double wmax = p.rpm_per_speed * p.ratios.back() * vmax + p.idle_rpm;
  return {{0.0, vmax}, {p.idle_rpm, wmax}, {1.0, 4.0},       {0.0, 1.0},
          {0.0, 1.0},  {0.0, 1.0},         {0.0, 1.0}};
}

std::vector<double> SurrogateAt::reset() {
  v_ = 0.0;
  gear_ = 1;
  rpm_ = params_.idle_rpm;
  // The first shift is not delayed.
  dwell_ = params_.min_dwell;
  return output();
}

std::vector<double> SurrogateAt::step(std::span<const double> u, double dt) {
  if (u.size() != 2) throw ModelError("surrogate AT expects (throttle, brake)");
  return step(u[0], u[1], dt);
}

std::vector<double> SurrogateAt::step(double throttle, double brake, double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("step size must be positive");
  double t = params_.throttle.clamp(throttle);
  double b = params_.brake.clamp(brake);
  if (t != throttle || b != brake) {
    if (clamped_++ == 0) {
      spdlog::warn("surrogate AT: input ({}, {}) outside bounds, clamped to ({}, {})", throttle,
                   brake, t, b);
    }
  }
  const double h = params_.integrator_step;
  auto full = static_cast<long>(std::floor(dt / h + 1e-9));
  for (long i = 0; i < full; ++i) substep(t, b, h);
  double rest = dt - static_cast<double>(full) * h;
  if (rest > 1e-12) substep(t, b, rest);
  return output();
}

void SurrogateAt::substep(double throttle, double brake, double h) {
  const auto& p = params_;
  double ratio = p.ratios[static_cast<std::size_t>(gear_ - 1)];
  double accel = p.throttle_gain * throttle * ratio - p.brake_gain * brake - p.drag * v_;
  v_ = std::max(0.0, v_ + h * accel);
  dwell_ += h;
  rpm_ = p.rpm_per_speed * ratio * v_ + p.idle_rpm;
  if (dwell_ + 1e-12 >= p.min_dwell) {
    int next = gear_;
    if (rpm_ > p.upshift_rpm && gear_ < 4) {
      next = gear_ + 1;
    } else if (rpm_ < p.downshift_rpm && gear_ > 1) {
      next = gear_ - 1;
    }
    if (next != gear_) {
      gear_ = next;
      dwell_ = 0.0;
      rpm_ = p.rpm_per_speed * p.ratios[static_cast<std::size_t>(gear_ - 1)] * v_ + p.idle_rpm;
    }
  }
}

std::vector<double> SurrogateAt::output() const {
  std::vector<double> out(kOutputs, 0.0);
  out[kSpeed] = v_;
  out[kRpm] = rpm_;
  out[kGear] = gear_;
  out[kGear1 + static_cast<std::size_t>(gear_ - 1)] = 1.0;
  return out;
}

}  // namespace stlrl
