#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "stlrl/agents/agent.hpp"
#include "stlrl/robustness/evaluator.hpp"
#include "stlrl/robustness/trace.hpp"
#include "stlrl/stl/parser.hpp"
#include "stlrl/system/input_signal.hpp"
#include "stlrl/system/system_model.hpp"

namespace stlrl {

struct FalsifyOptions {
  double dt = 1.0;
  double t_end = 10.0;
  std::size_t episodes = 200;
  /// Stop an episode at the first negative robustness instead of running
  /// it to t_end.
  bool early_exit = false;
  /// Keep inputs and traces of non-falsifying episodes.
  bool keep_traces = true;
  RobustnessOptions robustness;
  /// Recorded in the result; agents are seeded by their creator.
  std::uint64_t seed = 0;
};

/// Number of input steps per episode: i runs while i * dt < t_end.
std::size_t episode_steps(double dt, double t_end);

struct EpisodeRecord {
  InputSignal inputs;
  Trace trace;
  /// Monitor output at every trace sample, and reward(robustness[k]).
  std::vector<Robustness> robustness;
  std::vector<double> rewards;
  Robustness min_robustness = kInfinity;
  bool falsified = false;
  std::size_t steps = 0;
  /// Set when the model failed and the episode was aborted.
  std::optional<std::string> error;
};

enum class Outcome { Falsified, Exhausted, Aborted };

const char* outcome_name(Outcome o);

struct FalsificationResult {
  Outcome outcome = Outcome::Exhausted;
  InputSignal counterexample;
  /// 1-based index of the falsifying episode.
  std::optional<std::size_t> episode_index;
  std::vector<EpisodeRecord> episodes;
  double wall_ms = 0.0;
  std::uint64_t seed = 0;
  std::optional<std::string> error;
};

/// One episode: reset the model, then alternate agent.step and model.step
/// while i * dt < t_end, monitoring every new sample. The first agent call
/// receives the reset state and reward 0. `property` must be past-dependent.
/// Model failures are caught and recorded in `error`.
EpisodeRecord run_episode(SystemModel& model, Agent& agent, const LifeLongProperty& property,
                          const FalsifyOptions& options);

/// Whether a finished trace violates G body: minimum robustness below 0, or
/// exactly 0 with a false boolean verdict somewhere.
bool violates(const LifeLongProperty& property, const Trace& trace,
              const RobustnessOptions& options = {});

/// Runs up to options.episodes episodes after rewriting `psi` into its
/// past-dependent form. Between episodes the agent sees episode_finished()
/// then reset(). Throws std::invalid_argument if the budget is zero or the
/// property has an unbounded future reach.
FalsificationResult falsify(SystemModel& model, Agent& agent, const LifeLongProperty& psi,
                            const FalsifyOptions& options);

/// Re-simulates `u` and checks that the trace violates `psi`.
bool replay_violates(SystemModel& model, const LifeLongProperty& psi, const InputSignal& u,
                     const RobustnessOptions& options = {});

/// Result JSON: {outcome, episode_index, counterexample: [[t, u...]...],
/// episodes: [{min_rho, falsified, steps}], seed, wall_ms}.
nlohmann::json result_to_json(const FalsificationResult& r);

}  // namespace stlrl
