#pragma once

#include <array>
#include <cstddef>

#include "stlrl/system/system_model.hpp"

namespace stlrl {

/// Coefficients of the surrogate automatic-transmission plant.
struct SurrogateAtParams {
  double throttle_gain = 0.04;  // (km/h)/s per throttle unit, times gear ratio
  double brake_gain = 0.10;     // (km/h)/s per brake unit
  double drag = 0.02;           // 1/s
  std::array<double, 4> ratios{4.0, 2.5, 1.5, 1.0};
  double rpm_per_speed = 40.0;  // RPM per (km/h), times gear ratio
  double idle_rpm = 800.0;
  double upshift_rpm = 3500.0;
  double downshift_rpm = 1200.0;
  double min_dwell = 0.5;      // s between gear changes
  double integrator_step = 0.01;  // s
  InputBound throttle{0.0, 100.0};
  InputBound brake{0.0, 325.0};
};

/// Deterministic stand-in for the automatic-transmission benchmark:
/// inputs (throttle, brake), outputs (v, w, g) plus gear indicators g1..g4.
///
///   dv/dt = throttle_gain * throttle * r_g - brake_gain * brake - drag * v,  v >= 0
///   w     = rpm_per_speed * r_g * v + idle_rpm
///
/// integrated with explicit Euler at `integrator_step`. Gears move one at a
/// time: up when w > upshift_rpm, down when w < downshift_rpm, at most once
/// per `min_dwell` seconds.
class SurrogateAt final : public SystemModel {
 public:
  enum Output : std::size_t { kSpeed = 0, kRpm, kGear, kGear1, kGear2, kGear3, kGear4, kOutputs };

  explicit SurrogateAt(SurrogateAtParams params = {});

  const SignalSchema& input_schema() const override { return inputs_; }
  const SignalSchema& output_schema() const override { return outputs_; }
  const std::vector<InputBound>& input_bounds() const override { return bounds_; }

  /// v in [0, 200] km/h (the full-throttle terminal speed), w up to the
  /// matching RPM, indicators in [0, 1].
  std::vector<InputBound> output_ranges() const override;

  std::vector<double> reset() override;
  std::vector<double> step(std::span<const double> u, double dt) override;

  /// Convenience overload; throws std::invalid_argument on dt <= 0.
  std::vector<double> step(double throttle, double brake, double dt);

  const SurrogateAtParams& params() const { return params_; }
  double speed() const { return v_; }
  double rpm() const { return rpm_; }
  int gear() const { return gear_; }
  std::size_t clamped_inputs() const { return clamped_; }

  /// Schema shared by every SurrogateAt instance.
  static SignalSchema default_output_schema();

 private:
  void substep(double throttle, double brake, double h);
  std::vector<double> output() const;

  SurrogateAtParams params_;
  SignalSchema inputs_;
  SignalSchema outputs_;
  std::vector<InputBound> bounds_;

  double v_ = 0.0;
  double rpm_ = 0.0;
  int gear_ = 1;
  double dwell_ = 0.0;
  std::size_t clamped_ = 0;
};

}  // namespace stlrl
