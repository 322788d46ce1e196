#include "stlrl/agents/episode_optimizers.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace stlrl {

namespace {

nlohmann::json numbers_to_json(const std::vector<double>& xs) {
  nlohmann::json j = nlohmann::json::array();
  for (double x : xs) j.push_back(number_to_json(x));
  return j;
}

std::vector<double> numbers_from_json(const nlohmann::json& j) {
  std::vector<double> xs;
  for (const auto& x : j) xs.push_back(number_from_json(x));
  return xs;
}

}  // namespace

EpisodeParamOptimizer::EpisodeParamOptimizer(std::vector<InputBound> bounds, std::size_t steps,
                                             std::uint64_t seed)
    : bounds_(std::move(bounds)), steps_(steps), rng_(seed) {
  if (steps_ == 0) throw std::invalid_argument("episode optimizer needs at least one step");
  if (bounds_.empty()) throw std::invalid_argument("episode optimizer needs an input channel");
}

double EpisodeParamOptimizer::range(std::size_t coordinate) const {
  const auto& b = bounds_[coordinate % bounds_.size()];
  return b.hi - b.lo;
}

double EpisodeParamOptimizer::clamp(std::size_t coordinate, double x) const {
  return bounds_[coordinate % bounds_.size()].clamp(x);
}

std::vector<double> EpisodeParamOptimizer::uniform_point() {
  std::vector<double> x(dimension());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const auto& b = bounds_[i % bounds_.size()];
    x[i] = clamp(i, std::uniform_real_distribution<double>(b.lo, b.hi)(rng_));
  }
  return x;
}

std::vector<double> EpisodeParamOptimizer::step(std::span<const double>, double reward) {
  if (!first_step_) best_reward_ = std::max(best_reward_, reward);
  first_step_ = false;
  // Past the parameterized horizon the last step is held.
  std::size_t k = std::min(cursor_, steps_ - 1);
  ++cursor_;
  auto begin = candidate_.begin() + static_cast<std::ptrdiff_t>(k * channels());
  return {begin, begin + static_cast<std::ptrdiff_t>(channels())};
}

void EpisodeParamOptimizer::episode_finished(double min_robustness) {
  reported_ = min_robustness;
}

void EpisodeParamOptimizer::reset(std::span<const double>, double reward) {
  if (!first_step_) best_reward_ = std::max(best_reward_, reward);
  double objective;
  if (reported_) {
    objective = *reported_;
  } else if (best_reward_ == -kInfinityReward) {
    objective = std::numeric_limits<double>::infinity();
  } else {
    objective = -std::log1p(best_reward_);
  }
  conclude(objective);
  cursor_ = 0;
  first_step_ = true;
  best_reward_ = -kInfinityReward;
  reported_.reset();
  ++episodes_;
}

nlohmann::json EpisodeParamOptimizer::save_base() const {
  auto j = snapshot_header(kind());
  nlohmann::json b = nlohmann::json::array();
  for (const auto& x : bounds_) b.push_back({x.lo, x.hi});
  j["bounds"] = b;
  j["steps"] = steps_;
  j["rng"] = save_rng(rng_);
  j["candidate"] = candidate_;
  j["cursor"] = cursor_;
  j["episodes"] = episodes_;
  j["first_step"] = first_step_;
  j["best_reward"] = number_to_json(best_reward_);
  j["reported"] = reported_ ? number_to_json(*reported_) : nlohmann::json();
  return j;
}

void EpisodeParamOptimizer::load_base(const nlohmann::json& j) {
  check_snapshot(j, kind());
  std::vector<InputBound> bounds;
  for (const auto& b : j.at("bounds")) bounds.push_back({b.at(0), b.at(1)});
  if (bounds.size() != bounds_.size() || j.at("steps").get<std::size_t>() != steps_) {
    throw std::invalid_argument(std::string(kind()) + " snapshot has a different parameter shape");
  }
  bounds_ = std::move(bounds);
  load_rng(rng_, j.at("rng").get<std::string>());
  candidate_ = j.at("candidate").get<std::vector<double>>();
  cursor_ = j.at("cursor");
  episodes_ = j.at("episodes");
  first_step_ = j.at("first_step");
  best_reward_ = number_from_json(j.at("best_reward"));
  const auto& r = j.at("reported");
  reported_ = r.is_null() ? std::nullopt : std::optional<double>(number_from_json(r));
}

AnnealingAgent::AnnealingAgent(AnnealingConfig config, std::vector<InputBound> bounds,
                               std::size_t steps, std::uint64_t seed)
    : EpisodeParamOptimizer(std::move(bounds), steps, seed), config_(config) {
  if (!(config_.initial_temperature > 0.0)) {
    throw std::invalid_argument("sa agent: initial temperature must be positive");
  }
  if (!(config_.cooling > 0.0 && config_.cooling <= 1.0)) {
    throw std::invalid_argument("sa agent: cooling factor must lie in (0, 1]");
  }
  if (!(config_.step_fraction > 0.0)) throw std::invalid_argument("sa agent: step must be positive");
  if (!(config_.coordinate_probability >= 0.0 && config_.coordinate_probability <= 1.0)) {
    throw std::invalid_argument("sa agent: coordinate probability must lie in [0, 1]");
  }
  current_ = uniform_point();
  candidate_ = current_;
}

double AnnealingAgent::temperature() const {
  return config_.initial_temperature * std::pow(config_.cooling, static_cast<double>(proposals_));
}

bool AnnealingAgent::accept(double delta, double temperature, double u) {
  if (delta <= 0.0) return true;
  if (!(temperature > 0.0)) return false;
  return u < std::exp(-delta / temperature);
}

std::vector<double> AnnealingAgent::propose() {
  const std::size_t d = dimension();
  double p = config_.coordinate_probability > 0.0 ? config_.coordinate_probability
                                                  : 1.0 / static_cast<double>(d);
  std::vector<std::size_t> moved;
  std::bernoulli_distribution pick(p);
  for (std::size_t i = 0; i < d; ++i) {
    if (pick(rng_)) moved.push_back(i);
  }
  if (moved.empty()) moved.push_back(std::uniform_int_distribution<std::size_t>(0, d - 1)(rng_));
  std::vector<double> next = current_;
  std::normal_distribution<double> noise(0.0, 1.0);
  for (auto i : moved) next[i] = clamp(i, next[i] + config_.step_fraction * range(i) * noise(rng_));
  return next;
}

void AnnealingAgent::conclude(double objective) {
  if (episodes() == 0) {
    current_objective_ = objective;
  } else {
    double delta = objective - current_objective_;
    if (std::isnan(delta)) delta = 0.0;  // both infinite with the same sign
    double u = std::uniform_real_distribution<double>(0.0, 1.0)(rng_);
    if (accept(delta, temperature(), u)) {
      current_ = candidate_;
      current_objective_ = objective;
    }
    ++proposals_;
  }
  candidate_ = propose();
}

nlohmann::json AnnealingAgent::save() const {
  auto j = save_base();
  j["initial_temperature"] = config_.initial_temperature;
  j["cooling"] = config_.cooling;
  j["step_fraction"] = config_.step_fraction;
  j["coordinate_probability"] = config_.coordinate_probability;
  j["current"] = current_;
  j["current_objective"] = number_to_json(current_objective_);
  j["proposals"] = proposals_;
  return j;
}

void AnnealingAgent::load(const nlohmann::json& snapshot) {
  load_base(snapshot);
  config_.initial_temperature = snapshot.at("initial_temperature");
  config_.cooling = snapshot.at("cooling");
  config_.step_fraction = snapshot.at("step_fraction");
  config_.coordinate_probability = snapshot.at("coordinate_probability");
  current_ = snapshot.at("current").get<std::vector<double>>();
  current_objective_ = number_from_json(snapshot.at("current_objective"));
  proposals_ = snapshot.at("proposals");
}

CrossEntropyAgent::CrossEntropyAgent(CrossEntropyConfig config, std::vector<InputBound> bounds,
                                     std::size_t steps, std::uint64_t seed)
    : EpisodeParamOptimizer(std::move(bounds), steps, seed), config_(config) {
  if (config_.population < 4) throw std::invalid_argument("ce agent: population must be at least 4");
  if (!(config_.elite_fraction > 0.0 && config_.elite_fraction <= 1.0)) {
    throw std::invalid_argument("ce agent: elite fraction must lie in (0, 1]");
  }
  if (!(config_.sigma_floor_fraction >= 0.0) || !(config_.initial_sigma_fraction > 0.0)) {
    throw std::invalid_argument("ce agent: sigma fractions must be positive");
  }
  if (!(config_.sigma_smoothing > 0.0 && config_.sigma_smoothing <= 1.0)) {
    throw std::invalid_argument("ce agent: sigma smoothing must lie in (0, 1]");
  }
  mean_.resize(dimension());
  sigma_.resize(dimension());
  for (std::size_t i = 0; i < dimension(); ++i) {
    const auto& b = bounds_[i % bounds_.size()];
    mean_[i] = b.lo + 0.5 * (b.hi - b.lo);
    sigma_[i] = std::max(config_.initial_sigma_fraction, config_.sigma_floor_fraction) * range(i);
  }
  sample_generation();
}

std::size_t CrossEntropyAgent::elite_count() const {
  auto n = static_cast<std::size_t>(
      std::lround(config_.elite_fraction * static_cast<double>(config_.population)));
  return std::clamp<std::size_t>(n, 1, config_.population);
}

void CrossEntropyAgent::sample_generation() {
  samples_.assign(config_.population, std::vector<double>(dimension()));
  std::normal_distribution<double> noise(0.0, 1.0);
  for (auto& s : samples_) {
    for (std::size_t i = 0; i < dimension(); ++i) s[i] = clamp(i, mean_[i] + sigma_[i] * noise(rng_));
  }
  scores_.clear();
  candidate_ = samples_.front();
}

void CrossEntropyAgent::refit(const std::vector<std::vector<double>>& elites) {
  if (elites.empty()) return;
  const auto n = static_cast<double>(elites.size());
  const auto& e0 = elites.front();
  for (std::size_t i = 0; i < dimension(); ++i) {
    // Offsets from the first elite keep the mean exact for identical elites.
    double offset = 0.0;
    for (const auto& e : elites) offset += e[i] - e0[i];
    double m = e0[i] + offset / n;
    double var = 0.0;
    for (const auto& e : elites) var += (e[i] - m) * (e[i] - m);
    mean_[i] = m;
    const double a = config_.sigma_smoothing;
    sigma_[i] = std::max(a * std::sqrt(var / n) + (1.0 - a) * sigma_[i],
                         config_.sigma_floor_fraction * range(i));
  }
}

void CrossEntropyAgent::conclude(double objective) {
  scores_.push_back(objective);
  if (scores_.size() < samples_.size()) {
    candidate_ = samples_[scores_.size()];
    return;
  }
  std::vector<std::size_t> order(samples_.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return scores_[a] < scores_[b]; });
  std::vector<std::vector<double>> elites;
  for (std::size_t k = 0; k < elite_count(); ++k) elites.push_back(samples_[order[k]]);
  refit(elites);
  ++generation_;
  sample_generation();
}

nlohmann::json CrossEntropyAgent::save() const {
  auto j = save_base();
  j["population"] = config_.population;
  j["elite_fraction"] = config_.elite_fraction;
  j["sigma_floor_fraction"] = config_.sigma_floor_fraction;
  j["initial_sigma_fraction"] = config_.initial_sigma_fraction;
  j["sigma_smoothing"] = config_.sigma_smoothing;
  j["mean"] = mean_;
  j["sigma"] = sigma_;
  j["samples"] = samples_;
  j["scores"] = numbers_to_json(scores_);
  j["generation"] = generation_;
  return j;
}

void CrossEntropyAgent::load(const nlohmann::json& snapshot) {
  load_base(snapshot);
  config_.population = snapshot.at("population");
  config_.elite_fraction = snapshot.at("elite_fraction");
  config_.sigma_floor_fraction = snapshot.at("sigma_floor_fraction");
  config_.initial_sigma_fraction = snapshot.at("initial_sigma_fraction");
  config_.sigma_smoothing = snapshot.value("sigma_smoothing", 1.0);
  mean_ = snapshot.at("mean").get<std::vector<double>>();
  sigma_ = snapshot.at("sigma").get<std::vector<double>>();
  samples_ = snapshot.at("samples").get<std::vector<std::vector<double>>>();
  scores_ = numbers_from_json(snapshot.at("scores"));
  generation_ = snapshot.at("generation");
}

}  // namespace stlrl
