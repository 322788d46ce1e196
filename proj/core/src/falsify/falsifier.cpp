#include "stlrl/falsify/falsifier.hpp"

#include <chrono>
#include <stdexcept>

#include <spdlog/spdlog.h>

#include "stlrl/agents/agent.hpp"
#include "stlrl/falsify/reward.hpp"
#include "stlrl/robustness/monitor.hpp"
#include "stlrl/stl/reach.hpp"

namespace stlrl {

const char* outcome_name(Outcome o) {
  switch (o) {
    case Outcome::Falsified: return "falsified";
    case Outcome::Exhausted: return "exhausted";
    case Outcome::Aborted: return "aborted";
  }
  return "?";
}

bool violates(const LifeLongProperty& property, const Trace& trace,
              const RobustnessOptions& options) {
  auto m = global_min_rob(property.body(), trace, options);
  if (!m.index) return false;
  if (m.value < 0.0) return true;
  if (m.value > 0.0) return false;
  for (const auto& v : satisfaction_series(property.body(), trace)) {
    if (v && !*v) return true;
  }
  return false;
}

std::size_t episode_steps(double dt, double t_end) {
  if (!(dt > 0.0)) throw std::invalid_argument("dt must be positive");
  std::size_t n = 0;
  while (static_cast<double>(n) * dt < t_end - kTimeTolerance) ++n;
  return n;
}

namespace {

void clamp_inputs(std::vector<double>& u, const std::vector<InputBound>& bounds, bool& warned) {
  if (u.size() != bounds.size()) {
    throw std::invalid_argument("agent produced " + std::to_string(u.size()) +
                                " inputs for a model with " + std::to_string(bounds.size()));
  }
  for (std::size_t c = 0; c < u.size(); ++c) {
    double x = bounds[c].clamp(u[c]);
    if (x != u[c] && !warned) {
      spdlog::warn("agent input {} on channel {} outside [{}, {}], clamped", u[c], c, bounds[c].lo,
                   bounds[c].hi);
      warned = true;
    }
    u[c] = x;
  }
}

}  // namespace

EpisodeRecord run_episode(SystemModel& model, Agent& agent, const LifeLongProperty& property,
                          const FalsifyOptions& options) {
  if (!(options.dt > 0.0)) throw std::invalid_argument("dt must be positive");
  const auto& bounds = model.input_bounds();
  EpisodeRecord rec;
  rec.inputs = InputSignal(options.dt, bounds.size());
  rec.trace = Trace(model.output_schema());
  Monitor monitor(property.body(), model.output_schema(), options.robustness);
  bool warned = false;

  auto observe = [&](double t, const std::vector<double>& x) {
    rec.trace.push_back(t, x);
    Robustness rho = monitor.push(t, x);
    rec.robustness.push_back(rho);
    rec.rewards.push_back(reward(rho));
    return rho;
  };

  std::vector<double> x;
  double r = 0.0;
  try {
    x = model.reset();
    observe(0.0, x);
    const std::size_t steps = episode_steps(options.dt, options.t_end);
    for (std::size_t i = 0; i < steps; ++i) {
      auto u = agent.step(x, r);
      clamp_inputs(u, bounds, warned);
      rec.inputs.push_back(u);
      x = model.step(u, options.dt);
      Robustness rho = observe(static_cast<double>(i + 1) * options.dt, x);
      r = rec.rewards.back();
      ++rec.steps;
      if (options.early_exit && rho < 0.0) break;
    }
  } catch (const std::exception& e) {
    rec.error = e.what();
  }

  if (!rec.trace.empty()) {
    auto m = global_min_rob(property.body(), rec.trace, options.robustness);
    rec.min_robustness = m.value;
    rec.falsified = !rec.error && violates(property, rec.trace, options.robustness);
  }
  if (!rec.error) {
    agent.episode_finished(rec.min_robustness);
    agent.reset(x, r);
  }
  return rec;
}

FalsificationResult falsify(SystemModel& model, Agent& agent, const LifeLongProperty& psi,
                            const FalsifyOptions& options) {
  if (options.episodes == 0) throw std::invalid_argument("episode budget must be at least 1");
  const LifeLongProperty property = to_past_dependent(psi, options.dt);
  const auto start = std::chrono::steady_clock::now();

  FalsificationResult result;
  result.seed = options.seed;
  for (std::size_t k = 1; k <= options.episodes; ++k) {
    auto rec = run_episode(model, agent, property, options);
    if (rec.error) {
      spdlog::error("episode {} aborted: {}", k, *rec.error);
      result.outcome = Outcome::Aborted;
      result.error = rec.error;
      result.episodes.push_back(std::move(rec));
      break;
    }
    if (rec.falsified) {
      result.outcome = Outcome::Falsified;
      result.counterexample = rec.inputs;
      result.episode_index = k;
      result.episodes.push_back(std::move(rec));
      break;
    }
    if (!options.keep_traces) {
      rec.inputs = InputSignal();
      rec.trace = Trace();
    }
    result.episodes.push_back(std::move(rec));
  }
  result.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() -
                                                            start).count();
  return result;
}

bool replay_violates(SystemModel& model, const LifeLongProperty& psi, const InputSignal& u,
                     const RobustnessOptions& options) {
  return violates(to_past_dependent(psi, u.dt()), run_signal(model, u), options);
}

nlohmann::json result_to_json(const FalsificationResult& r) {
  nlohmann::json j;
  j["outcome"] = outcome_name(r.outcome);
  j["episode_index"] = r.episode_index ? nlohmann::json(*r.episode_index) : nlohmann::json();
  nlohmann::json cex = nlohmann::json::array();
  for (std::size_t k = 0; k < r.counterexample.size(); ++k) {
    nlohmann::json row = {r.counterexample.time(k)};
    for (double v : r.counterexample.at(k)) row.push_back(v);
    cex.push_back(row);
  }
  j["counterexample"] = cex;
  nlohmann::json eps = nlohmann::json::array();
  for (const auto& e : r.episodes) {
    nlohmann::json rec = {{"min_rho", number_to_json(e.min_robustness)},
                          {"falsified", e.falsified},
                          {"steps", e.steps}};
    if (e.error) rec["error"] = *e.error;
    eps.push_back(rec);
  }
  j["episodes"] = eps;
  j["seed"] = r.seed;
  j["wall_ms"] = r.wall_ms;
  if (r.error) j["error"] = *r.error;
  return j;
}

}  // namespace stlrl
