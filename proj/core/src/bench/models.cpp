#include "stlrl/bench/models.hpp"

#include <stdexcept>

#include "stlrl/system/external_model.hpp"
#include "stlrl/system/surrogate_at.hpp"

namespace stlrl {

ModelSpec parse_model_spec(std::string_view text) {
  ModelSpec spec;
  if (text == "surrogate-at" || text == "echo") {
    spec.kind = std::string(text);
  } else if (text.starts_with("external:") && text.size() > 9) {
    spec.kind = "external";
    spec.command = std::string(text.substr(9));
  } else {
    throw std::invalid_argument("unknown model '" + std::string(text) +
                                "' (expected surrogate-at, echo or external:CMD)");
  }
  return spec;
}

void check_signals(const SignalSchema& property, const SignalSchema& model) {
  for (std::size_t i = 0; i < property.size(); ++i) {
    const auto& s = property[i];
    auto col = model.find(s.name);
    if (!col) throw std::invalid_argument("model has no output signal '" + s.name + "'");
    if (model[*col].kind != s.kind) {
      throw std::invalid_argument("signal '" + s.name + "' has a different kind in the model");
    }
  }
}

ModelFactory make_model_factory(const ModelSpec& spec, const SignalSchema& outputs) {
  if (spec.kind == "surrogate-at") {
    return [](double) { return std::make_unique<SurrogateAt>(); };
  }
  if (spec.kind == "echo") {
    std::vector<InputBound> bounds;
    if (spec.inputs.empty()) {
      bounds.assign(outputs.size(), InputBound{0.0, 1.0});
    } else {
      for (const auto& in : spec.inputs) bounds.push_back(in.second);
    }
    if (bounds.size() != outputs.size()) {
      throw std::invalid_argument("echo model needs one input per output signal");
    }
    return [outputs, bounds](double) { return std::make_unique<EchoModel>(outputs, bounds); };
  }
  if (spec.kind == "external") {
    if (spec.command.empty()) throw std::invalid_argument("external model needs a command");
    SignalSchema inputs;
    std::vector<InputBound> bounds;
    if (spec.inputs.empty()) {
      inputs.add("throttle", SignalKind::Real);
      inputs.add("brake", SignalKind::Real);
      bounds = {{0.0, 100.0}, {0.0, 325.0}};
    } else {
      for (const auto& [name, b] : spec.inputs) {
        inputs.add(name, SignalKind::Real);
        bounds.push_back(b);
      }
    }
    return [spec, inputs, bounds, outputs](double dt) {
      return external_model_connect(spec.command, inputs, bounds, outputs, dt, spec.timeout);
    };
  }
  throw std::invalid_argument("unknown model kind '" + spec.kind + "'");
}

}  // namespace stlrl
