#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include "stlrl/agents/agent.hpp"
#include "stlrl/agents/double_q.hpp"
#include "stlrl/agents/episode_optimizers.hpp"

namespace stlrl {

/// Agent kind plus the hyperparameters of every kind; only the block
/// matching `kind` is used.
struct AgentConfig {
  std::string kind = "random";  // random | q | sa | ce
  /// Fixed seed; when absent the caller supplies one (e.g. per trial).
  std::optional<std::uint64_t> seed;
  DoubleQConfig q;
  AnnealingConfig sa;
  CrossEntropyConfig ce;
};

/// Reads a flat agent block. Unknown keys are rejected so that typos do
/// not silently fall back to defaults.
AgentConfig agent_config_from_json(const nlohmann::json& j);
nlohmann::json agent_config_to_json(const AgentConfig& config);

bool is_agent_kind(std::string_view kind);

std::unique_ptr<Agent> make_agent(const AgentConfig& config, const AgentContext& context,
                                  std::uint64_t seed);

}  // namespace stlrl
