#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "stlrl/agents/agent_config.hpp"
#include "stlrl/bench/models.hpp"
#include "stlrl/falsify/falsifier.hpp"
#include "stlrl/stl/parser.hpp"

namespace stlrl {

struct AgentEntry {
  std::string name;
  /// "ours" or "baseline"; significance marks only go to the best "ours" row.
  std::string group;
  AgentConfig config;
};

/// Experiment description; see docs/experiment-config.md for the TOML form.
struct ExperimentConfig {
  std::string name = "experiment";
  std::string property;  // preset name or property file
  ParamTable params;
  ModelSpec model;
  std::vector<AgentEntry> agents;
  std::vector<double> dts = {1.0, 5.0, 10.0};
  double t_end = 30.0;
  std::size_t episodes = 200;
  std::size_t trials = 20;
  std::uint64_t seed = 0;
  /// Worker threads; 0 means one per hardware thread.
  std::size_t jobs = 0;
  bool early_exit = false;
  double bool_magnitude = 1.0;
  std::string summary_path;
  std::string raw_path;
};

/// Parses the TOML experiment config. Relative paths are resolved against
/// `base_dir`. Throws std::invalid_argument with the offending key.
ExperimentConfig parse_experiment_config(std::string_view toml_text,
                                         const std::string& base_dir = ".");
ExperimentConfig load_experiment_config(const std::string& path);

/// Seed of trial `trial` in the cell (agent, dt_index), derived from the
/// master seed.
std::uint64_t trial_seed(std::uint64_t master, std::size_t agent, std::size_t dt_index,
                         std::size_t trial);

struct TrialRecord {
  std::size_t agent = 0;
  std::size_t dt_index = 0;
  std::size_t trial = 0;
  std::uint64_t seed = 0;
  Outcome outcome = Outcome::Exhausted;
  bool success = false;
  /// Falsifying episode, or the budget for a failed trial.
  std::size_t episodes = 0;
  double wall_ms = 0.0;
  std::optional<std::string> error;
};

struct CellSummary {
  std::size_t agent = 0;
  std::size_t dt_index = 0;
  double dt = 0.0;
  std::size_t successes = 0;
  std::size_t trials = 0;
  double success_rate = 0.0;
  double median_episodes = 0.0;
  std::vector<double> episodes;  // capped, in trial order
};

/// Cell ordering used for best-dt selection: higher success rate, then lower
/// median, then smaller dt.
bool better_cell(const CellSummary& a, const CellSummary& b);

struct SummaryRow {
  std::string property;
  std::string agent;
  std::string group;
  double dt = 0.0;
  double success_rate = 0.0;
  double median_episodes = 0.0;
  /// Against the best row of the other group; absent without one.
  std::optional<double> p_fisher;
  std::optional<double> p_mwu;
  std::string marks;
};

struct ExperimentResult {
  std::vector<TrialRecord> trials;  // ordered by (agent, dt, trial)
  std::vector<CellSummary> cells;   // ordered by (agent, dt)
  std::vector<SummaryRow> rows;     // one per agent, at its best dt
};

/// "" / "*" (p < 0.05) / "**" (p < 0.001).
std::string significance_mark(double p);

/// Builds one summary row per agent from the cells, pairing the best "ours"
/// and best "baseline" rows for the significance tests.
std::vector<SummaryRow> summarize(const ExperimentConfig& config,
                                  const std::vector<CellSummary>& cells);

CellSummary summarize_cell(std::size_t agent, std::size_t dt_index, double dt,
                           const std::vector<TrialRecord>& trials, std::size_t budget);

using TrialCallback = std::function<void(const TrialRecord&)>;

/// Runs every (agent, dt, trial) falsification, in parallel up to
/// config.jobs. Results do not depend on the number of jobs. Trial failures
/// are recorded, never thrown; configuration errors are thrown up front.
ExperimentResult run_experiment(const ExperimentConfig& config,
                                const TrialCallback& on_trial = {});

/// Columns: property, agent, dt, success_rate, median_episodes, p_fisher,
/// p_mwu, marks.
void write_summary_csv(std::ostream& out, const std::vector<SummaryRow>& rows);

nlohmann::json experiment_to_json(const ExperimentConfig& config, const ExperimentResult& result);

}  // namespace stlrl
