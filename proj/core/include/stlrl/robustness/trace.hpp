#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "stlrl/stl/schema.hpp"

namespace stlrl {

/// Finite sampled output trace: strictly increasing timestamps (the first
/// one non-negative), one state vector per timestamp, one entry per schema
/// signal. Boolean signals are stored as 0 / 1.
class Trace {
 public:
  Trace() = default;
  explicit Trace(SignalSchema schema);

  /// Appends a sample; throws std::invalid_argument if the time does not
  /// increase or the state has the wrong width.
  void push_back(double time, std::span<const double> state);

  /// Drops the oldest `count` samples.
  void pop_front(std::size_t count);

  std::size_t size() const { return times_.size(); }
  bool empty() const { return times_.empty(); }
  std::size_t width() const { return schema_.size(); }

  const SignalSchema& schema() const { return schema_; }
  const std::vector<double>& times() const { return times_; }
  double time(std::size_t i) const { return times_[i]; }
  std::span<const double> state(std::size_t i) const {
    return {values_.data() + i * width(), width()};
  }
  double value(std::size_t i, std::size_t column) const {
    return values_[i * width() + column];
  }

  /// Copy of samples [begin, end).
  Trace slice(std::size_t begin, std::size_t end) const;

  friend bool operator==(const Trace& a, const Trace& b);

 private:
  SignalSchema schema_;
  std::vector<double> times_;
  std::vector<double> values_;  // row-major, width() per sample
};

/// Writes `time,<signal>...` with one row per sample; numbers are written
/// with enough digits to read back bit-exactly.
void write_trace_csv(std::ostream& out, const Trace& trace);

/// Reads a trace CSV; columns are matched to `schema` by name and every
/// schema signal must be present. Extra columns are ignored.
Trace read_trace_csv(std::istream& in, const SignalSchema& schema);
Trace load_trace_csv(const std::string& path, const SignalSchema& schema);

/// Writes a `time,rho` robustness dump.
void write_robustness_csv(std::ostream& out, std::span<const double> times,
                          std::span<const double> rho);

}  // namespace stlrl
