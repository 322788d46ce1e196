#pragma once

#include <cstdint>
#include <memory>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "stlrl/stl/schema.hpp"
#include "stlrl/system/system_model.hpp"

namespace stlrl {

/// Input-generation policy driven by the falsification loop.
///
/// Per episode the loop calls step(x, r) once per input step, with r = 0 on
/// the first call, then episode_finished() and reset(x, r) with the final
/// state and reward. Learning state persists across episodes.
class Agent {
 public:
  virtual ~Agent() = default;

  /// Next input; always inside the declared input bounds.
  virtual std::vector<double> step(std::span<const double> state, double reward) = 0;

  /// End of episode notification with the last state and reward.
  virtual void reset(std::span<const double> state, double reward) = 0;

  /// Minimum robustness of the episode that just ended; called before reset().
  virtual void episode_finished(double min_robustness) { (void)min_robustness; }

  virtual std::string_view kind() const = 0;

  /// Versioned, self-describing snapshot of configuration and learning state.
  virtual nlohmann::json save() const = 0;
  /// Restores a snapshot taken from an agent of the same kind and shape.
  virtual void load(const nlohmann::json& snapshot) = 0;
};

/// What an agent needs to know about the problem it is driving.
struct AgentContext {
  SignalSchema outputs;
  std::vector<InputBound> bounds;
  /// Nominal output ranges used for observation discretization; may be empty.
  std::vector<InputBound> output_ranges;
  std::size_t steps_per_episode = 1;
  std::size_t episode_budget = 1;
};

inline constexpr int kSnapshotVersion = 1;
inline constexpr const char* kSnapshotFormat = "stlrl-agent-snapshot";

/// Snapshot header shared by every agent kind.
nlohmann::json snapshot_header(std::string_view kind);
/// Throws std::invalid_argument unless `snapshot` carries a matching header.
void check_snapshot(const nlohmann::json& snapshot, std::string_view kind);

std::string save_rng(const std::mt19937_64& rng);
void load_rng(std::mt19937_64& rng, const std::string& text);

/// JSON cannot hold infinities; they are stored as the strings "inf" / "-inf".
nlohmann::json number_to_json(double x);
double number_from_json(const nlohmann::json& j);

/// Uniform input inside every channel box.
class RandomAgent final : public Agent {
 public:
  RandomAgent(std::vector<InputBound> bounds, std::uint64_t seed);

  std::vector<double> step(std::span<const double> state, double reward) override;
  void reset(std::span<const double> state, double reward) override;
  std::string_view kind() const override { return "random"; }
  nlohmann::json save() const override;
  void load(const nlohmann::json& snapshot) override;

 private:
  std::vector<InputBound> bounds_;
  std::mt19937_64 rng_;
};

}  // namespace stlrl
