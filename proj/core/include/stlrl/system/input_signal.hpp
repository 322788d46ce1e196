#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace stlrl {

/// Piecewise-constant input: value k holds on [k*dt, (k+1)*dt).
class InputSignal {
 public:
  InputSignal() = default;
  InputSignal(double dt, std::size_t channels);

  void push_back(std::span<const double> u);

  double dt() const { return dt_; }
  std::size_t channels() const { return channels_; }
  std::size_t size() const { return channels_ == 0 ? 0 : data_.size() / channels_; }
  bool empty() const { return data_.empty(); }

  double time(std::size_t k) const { return static_cast<double>(k) * dt_; }
  std::span<const double> at(std::size_t k) const {
    return {data_.data() + k * channels_, channels_};
  }
  /// Value in force at time t (the step with the largest time <= t).
  std::span<const double> value_at(double t) const;

  /// The first `count` steps.
  InputSignal prefix(std::size_t count) const;

  const std::vector<double>& data() const { return data_; }

  friend bool operator==(const InputSignal&, const InputSignal&) = default;

 private:
  double dt_ = 1.0;
  std::size_t channels_ = 0;
  std::vector<double> data_;
};

}  // namespace stlrl
