#pragma once

#include <chrono>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "stlrl/system/system_model.hpp"

namespace stlrl {

/// Which system under test to build.
struct ModelSpec {
  std::string kind = "surrogate-at";  // surrogate-at | echo | external
  std::string command;                // external only
  std::chrono::milliseconds timeout{30000};
  /// Input channels for echo / external models. Empty: the surrogate's
  /// throttle [0, 100] and brake [0, 325] for external, one [0, 1]
  /// channel per output for echo.
  std::vector<std::pair<std::string, InputBound>> inputs;
};

/// Parses a --model argument: "surrogate-at", "echo" or "external:CMD".
ModelSpec parse_model_spec(std::string_view text);

/// Factory for `spec`. `outputs` is the property's signal schema; echo and
/// external models expose exactly these outputs.
ModelFactory make_model_factory(const ModelSpec& spec, const SignalSchema& outputs);

/// Throws std::invalid_argument unless every signal of `property` exists in
/// `model` with the same kind.
void check_signals(const SignalSchema& property, const SignalSchema& model);

}  // namespace stlrl
