#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace stlrl {

enum class SignalKind { Real, Bool };

struct Signal {
  std::string name;
  SignalKind kind = SignalKind::Real;

  friend bool operator==(const Signal&, const Signal&) = default;
};

/// Ordered list of named signals. The position of a signal is its column in
/// every state vector that uses this schema.
class SignalSchema {
 public:
  SignalSchema() = default;
  explicit SignalSchema(std::vector<Signal> signals);

  /// Appends a signal; throws std::invalid_argument on duplicate or empty names.
  void add(std::string name, SignalKind kind);

  std::optional<std::size_t> find(std::string_view name) const;
  std::size_t column(std::string_view name) const;  // throws std::out_of_range

  const std::vector<Signal>& signals() const { return signals_; }
  std::size_t size() const { return signals_.size(); }
  bool empty() const { return signals_.empty(); }
  const Signal& operator[](std::size_t i) const { return signals_[i]; }

  std::vector<std::string> names() const;

  friend bool operator==(const SignalSchema&, const SignalSchema&) = default;

 private:
  std::vector<Signal> signals_;
};

}  // namespace stlrl
