#pragma once

#include <optional>

#include "stlrl/agents/agent.hpp"

namespace stlrl {

/// Uniform binning of one output signal.
struct ObservationBins {
  std::string signal;
  double lo = 0.0;
  double hi = 1.0;
  std::size_t count = 8;

  friend bool operator==(const ObservationBins&, const ObservationBins&) = default;
};

struct DoubleQConfig {
  /// Empty: every real output signal with a known range, `default_bins` each.
  std::vector<ObservationBins> bins;
  std::size_t default_bins = 8;
  /// Grid levels per input channel; empty means 5 per channel.
  std::vector<std::size_t> action_levels;
  double alpha = 0.5;
  double gamma = 0.99;  // agent-internal discount
  double epsilon_start = 1.0;
  double epsilon_end = 0.05;
  /// Episodes over which epsilon decays linearly; 0 means half the budget.
  std::size_t epsilon_decay_episodes = 0;
};

/// Tabular double Q-learning over a discretized observation space and a
/// finite grid of inputs. Two tables cross-evaluate each other's greedy
/// action; each transition updates one of them, chosen at random.
class DoubleQAgent final : public Agent {
 public:
  enum class Table { A, B };

  DoubleQAgent(DoubleQConfig config, const AgentContext& context, std::uint64_t seed);

  std::vector<double> step(std::span<const double> state, double reward) override;
  void reset(std::span<const double> state, double reward) override;
  std::string_view kind() const override { return "q"; }
  nlohmann::json save() const override;
  void load(const nlohmann::json& snapshot) override;

  std::size_t observation_count() const { return observations_; }
  std::size_t action_count() const { return actions_; }
  std::size_t observe(std::span<const double> state) const;
  std::vector<double> action_values(std::size_t action) const;

  double q(Table t, std::size_t obs, std::size_t action) const;
  void set_q(Table t, std::size_t obs, std::size_t action, double value);

  /// One double-Q update of table `t`; `next` absent means terminal.
  void update(Table t, std::size_t obs, std::size_t action, double reward,
              std::optional<std::size_t> next);
  /// update() on a randomly chosen table.
  void learn(std::size_t obs, std::size_t action, double reward, std::optional<std::size_t> next);

  /// Greedy action on Q_A + Q_B; exact ties broken at random.
  std::size_t greedy_action(std::size_t obs);
  double epsilon() const;
  std::size_t episodes() const { return episodes_; }
  const DoubleQConfig& config() const { return config_; }

 private:
  std::vector<double>& table(Table t) { return t == Table::A ? qa_ : qb_; }
  const std::vector<double>& table(Table t) const { return t == Table::A ? qa_ : qb_; }
  std::size_t argmax(const std::vector<double>& t, std::size_t obs) const;

  DoubleQConfig config_;
  std::vector<InputBound> bounds_;
  std::vector<std::size_t> columns_;  // output column per observation bin spec
  std::size_t observations_ = 1;
  std::size_t actions_ = 1;
  std::size_t episode_budget_ = 1;

  std::vector<double> qa_;
  std::vector<double> qb_;
  std::mt19937_64 rng_;
  std::size_t episodes_ = 0;
  std::optional<std::size_t> last_obs_;
  std::optional<std::size_t> last_action_;
};

}  // namespace stlrl
