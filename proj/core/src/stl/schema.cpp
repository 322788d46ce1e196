#include "stlrl/stl/schema.hpp"

#include <stdexcept>

namespace stlrl {

SignalSchema::SignalSchema(std::vector<Signal> signals) {
  for (auto& s : signals) add(std::move(s.name), s.kind);
}

void SignalSchema::add(std::string name, SignalKind kind) {
  if (name.empty()) throw std::invalid_argument("signal name must not be empty");
  if (find(name)) throw std::invalid_argument("duplicate signal '" + name + "'");
  signals_.push_back({std::move(name), kind});
}

std::optional<std::size_t> SignalSchema::find(std::string_view name) const {
  for (std::size_t i = 0; i < signals_.size(); ++i) {
    if (signals_[i].name == name) return i;
  }
  return std::nullopt;
}

std::size_t SignalSchema::column(std::string_view name) const {
  if (auto i = find(name)) return *i;
  throw std::out_of_range("unknown signal '" + std::string(name) + "'");
}

std::vector<std::string> SignalSchema::names() const {
  std::vector<std::string> out;
  out.reserve(signals_.size());
  for (const auto& s : signals_) out.push_back(s.name);
  return out;
}

}  // namespace stlrl
