#pragma once

#include <limits>
#include <optional>

#include "stlrl/agents/agent.hpp"

namespace stlrl {

/// Base for whole-trajectory optimizers. A candidate parameter vector holds
/// one constant input per step and channel; step() replays it and learning
/// only happens at reset(), scored by the episode's minimum robustness.
class EpisodeParamOptimizer : public Agent {
 public:
  EpisodeParamOptimizer(std::vector<InputBound> bounds, std::size_t steps, std::uint64_t seed);

  std::vector<double> step(std::span<const double> state, double reward) override;
  void reset(std::span<const double> state, double reward) override;
  void episode_finished(double min_robustness) override;

  std::size_t steps() const { return steps_; }
  std::size_t channels() const { return bounds_.size(); }
  std::size_t dimension() const { return steps_ * bounds_.size(); }
  /// Parameters replayed during the current episode.
  const std::vector<double>& candidate() const { return candidate_; }
  std::size_t episodes() const { return episodes_; }

 protected:
  /// Score the finished candidate and load the next one into candidate_.
  virtual void conclude(double objective) = 0;

  double range(std::size_t coordinate) const;
  double clamp(std::size_t coordinate, double x) const;
  std::vector<double> uniform_point();

  nlohmann::json save_base() const;
  void load_base(const nlohmann::json& j);

  std::vector<InputBound> bounds_;
  std::size_t steps_;
  std::mt19937_64 rng_;
  std::vector<double> candidate_;

 private:
  std::size_t cursor_ = 0;
  std::size_t episodes_ = 0;
  bool first_step_ = true;
  double best_reward_ = -kInfinityReward;
  std::optional<double> reported_;

  static constexpr double kInfinityReward = std::numeric_limits<double>::infinity();
};

struct AnnealingConfig {
  double initial_temperature = 1.0;
  double cooling = 0.97;        // T_k = T_0 * cooling^k
  double step_fraction = 0.1;   // perturbation sigma as a fraction of channel range
  /// Probability that a coordinate is perturbed; 0 means 1 / dimension.
  /// At least one coordinate always moves.
  double coordinate_probability = 0.0;
};

/// Simulated annealing over the episode parameters.
class AnnealingAgent final : public EpisodeParamOptimizer {
 public:
  AnnealingAgent(AnnealingConfig config, std::vector<InputBound> bounds, std::size_t steps,
                 std::uint64_t seed);

  std::string_view kind() const override { return "sa"; }
  nlohmann::json save() const override;
  void load(const nlohmann::json& snapshot) override;

  double temperature() const;
  const std::vector<double>& current() const { return current_; }
  double current_objective() const { return current_objective_; }

  /// Metropolis rule: accept when delta <= 0, otherwise when u < exp(-delta / temperature).
  static bool accept(double delta, double temperature, double u);

 protected:
  void conclude(double objective) override;

 private:
  std::vector<double> propose();

  AnnealingConfig config_;
  std::vector<double> current_;
  double current_objective_ = std::numeric_limits<double>::infinity();
  std::size_t proposals_ = 0;
};

struct CrossEntropyConfig {
  std::size_t population = 10;
  double elite_fraction = 0.2;
  double sigma_floor_fraction = 0.01;    // of channel range
  double initial_sigma_fraction = 0.5;   // of channel range
  /// Weight of the elite spread in the new sigma; the rest keeps the old
  /// sigma. 1 refits sigma from the elites alone. The mean is never smoothed.
  double sigma_smoothing = 0.5;
};

/// Cross-entropy method with a diagonal Gaussian over the episode parameters.
class CrossEntropyAgent final : public EpisodeParamOptimizer {
 public:
  CrossEntropyAgent(CrossEntropyConfig config, std::vector<InputBound> bounds, std::size_t steps,
                    std::uint64_t seed);

  std::string_view kind() const override { return "ce"; }
  nlohmann::json save() const override;
  void load(const nlohmann::json& snapshot) override;

  const std::vector<double>& mean() const { return mean_; }
  const std::vector<double>& sigma() const { return sigma_; }
  std::size_t elite_count() const;
  std::size_t generation() const { return generation_; }

  /// Refits mean and sigma to `elites` (rows of dimension() values).
  void refit(const std::vector<std::vector<double>>& elites);

 protected:
  void conclude(double objective) override;

 private:
  void sample_generation();

  CrossEntropyConfig config_;
  std::vector<double> mean_;
  std::vector<double> sigma_;
  std::vector<std::vector<double>> samples_;
  std::vector<double> scores_;
  std::size_t generation_ = 0;
};

}  // namespace stlrl
