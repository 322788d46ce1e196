#include "stlrl/agents/double_q.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace stlrl {

namespace {

std::size_t bin_of(const ObservationBins& b, double x) {
  if (!(x > b.lo)) return 0;  // also NaN
  if (x >= b.hi) return b.count - 1;
  auto k = static_cast<std::size_t>((x - b.lo) / (b.hi - b.lo) * static_cast<double>(b.count));
  return std::min(k, b.count - 1);
}

double grid_value(const InputBound& b, std::size_t level, std::size_t levels) {
  if (levels == 1) return b.lo + 0.5 * (b.hi - b.lo);
  double x = b.lo + (b.hi - b.lo) * static_cast<double>(level) / static_cast<double>(levels - 1);
  return b.clamp(x);
}

}  // namespace

DoubleQAgent::DoubleQAgent(DoubleQConfig config, const AgentContext& context, std::uint64_t seed)
    : config_(std::move(config)),
      bounds_(context.bounds),
      episode_budget_(std::max<std::size_t>(1, context.episode_budget)),
      rng_(seed) {
  if (!(config_.alpha > 0.0 && config_.alpha <= 1.0)) {
    throw std::invalid_argument("q agent: alpha must lie in (0, 1]");
  }
  if (!(config_.gamma >= 0.0 && config_.gamma <= 1.0)) {
    throw std::invalid_argument("q agent: gamma must lie in [0, 1]");
  }
  for (double e : {config_.epsilon_start, config_.epsilon_end}) {
    if (!(e >= 0.0 && e <= 1.0)) throw std::invalid_argument("q agent: epsilon must lie in [0, 1]");
  }

  if (config_.bins.empty()) {
    for (std::size_t i = 0; i < context.outputs.size(); ++i) {
      const auto& s = context.outputs[i];
      if (s.kind != SignalKind::Real || i >= context.output_ranges.size()) continue;
      const auto& r = context.output_ranges[i];
      config_.bins.push_back({s.name, r.lo, r.hi, config_.default_bins});
    }
  }
  for (const auto& b : config_.bins) {
    auto col = context.outputs.find(b.signal);
    if (!col) throw std::invalid_argument("q agent: unknown observation signal '" + b.signal + "'");
    if (b.count == 0 || !(b.hi > b.lo)) {
      throw std::invalid_argument("q agent: bad binning for '" + b.signal + "'");
    }
    columns_.push_back(*col);
    observations_ *= b.count;
  }

  if (config_.action_levels.empty()) config_.action_levels.assign(bounds_.size(), 5);
  if (config_.action_levels.size() != bounds_.size()) {
    throw std::invalid_argument("q agent: action grid needs one level count per input channel");
  }
  for (auto l : config_.action_levels) {
    if (l == 0) throw std::invalid_argument("q agent: action grid levels must be positive");
    actions_ *= l;
  }
  qa_.assign(observations_ * actions_, 0.0);
  qb_.assign(observations_ * actions_, 0.0);
}

std::size_t DoubleQAgent::observe(std::span<const double> state) const {
  std::size_t index = 0;
  for (std::size_t i = 0; i < columns_.size(); ++i) {
    index = index * config_.bins[i].count + bin_of(config_.bins[i], state[columns_[i]]);
  }
  return index;
}

std::vector<double> DoubleQAgent::action_values(std::size_t action) const {
  std::vector<double> u(bounds_.size());
  for (std::size_t c = bounds_.size(); c-- > 0;) {
    std::size_t levels = config_.action_levels[c];
    u[c] = grid_value(bounds_[c], action % levels, levels);
    action /= levels;
  }
  return u;
}

double DoubleQAgent::q(Table t, std::size_t obs, std::size_t action) const {
  return table(t).at(obs * actions_ + action);
}

void DoubleQAgent::set_q(Table t, std::size_t obs, std::size_t action, double value) {
  table(t).at(obs * actions_ + action) = value;
}

std::size_t DoubleQAgent::argmax(const std::vector<double>& t, std::size_t obs) const {
  const double* row = t.data() + obs * actions_;
  return static_cast<std::size_t>(std::max_element(row, row + actions_) - row);
}

void DoubleQAgent::update(Table t, std::size_t obs, std::size_t action, double reward,
                          std::optional<std::size_t> next) {
  const auto& other = table(t == Table::A ? Table::B : Table::A);
  double target = reward;
  if (next) target += config_.gamma * other[*next * actions_ + argmax(table(t), *next)];
  double& q = table(t)[obs * actions_ + action];
  q += config_.alpha * (target - q);
}

void DoubleQAgent::learn(std::size_t obs, std::size_t action, double reward,
                         std::optional<std::size_t> next) {
  Table t = std::bernoulli_distribution(0.5)(rng_) ? Table::A : Table::B;
  update(t, obs, action, reward, next);
}

std::size_t DoubleQAgent::greedy_action(std::size_t obs) {
  const double* a = qa_.data() + obs * actions_;
  const double* b = qb_.data() + obs * actions_;
  double best = -std::numeric_limits<double>::infinity();
  std::vector<std::size_t> ties;
  for (std::size_t k = 0; k < actions_; ++k) {
    double v = a[k] + b[k];
    if (v > best) {
      best = v;
      ties.assign(1, k);
    } else if (v == best) {
      ties.push_back(k);
    }
  }
  if (ties.size() == 1) return ties.front();
  return ties[std::uniform_int_distribution<std::size_t>(0, ties.size() - 1)(rng_)];
}

double DoubleQAgent::epsilon() const {
  std::size_t decay = config_.epsilon_decay_episodes;
  if (decay == 0) decay = std::max<std::size_t>(1, episode_budget_ / 2);
  double frac = std::min(1.0, static_cast<double>(episodes_) / static_cast<double>(decay));
  return config_.epsilon_start + (config_.epsilon_end - config_.epsilon_start) * frac;
}

std::vector<double> DoubleQAgent::step(std::span<const double> state, double reward) {
  std::size_t obs = observe(state);
  if (last_obs_) learn(*last_obs_, *last_action_, reward, obs);
  std::size_t action;
  if (std::uniform_real_distribution<double>(0.0, 1.0)(rng_) < epsilon()) {
    action = std::uniform_int_distribution<std::size_t>(0, actions_ - 1)(rng_);
  } else {
    action = greedy_action(obs);
  }
  last_obs_ = obs;
  last_action_ = action;
  return action_values(action);
}

void DoubleQAgent::reset(std::span<const double>, double reward) {
  if (last_obs_) learn(*last_obs_, *last_action_, reward, std::nullopt);
  last_obs_.reset();
  last_action_.reset();
  ++episodes_;
}

nlohmann::json DoubleQAgent::save() const {
  auto j = snapshot_header(kind());
  nlohmann::json bins = nlohmann::json::array();
  for (const auto& b : config_.bins) {
    bins.push_back({{"signal", b.signal}, {"lo", b.lo}, {"hi", b.hi}, {"count", b.count}});
  }
  j["bins"] = bins;
  j["action_levels"] = config_.action_levels;
  j["alpha"] = config_.alpha;
  j["gamma"] = config_.gamma;
  j["epsilon_start"] = config_.epsilon_start;
  j["epsilon_end"] = config_.epsilon_end;
  j["epsilon_decay_episodes"] = config_.epsilon_decay_episodes;
  j["episode_budget"] = episode_budget_;
  j["episodes"] = episodes_;
  j["q_a"] = qa_;
  j["q_b"] = qb_;
  j["rng"] = save_rng(rng_);
  j["last_obs"] = last_obs_ ? nlohmann::json(*last_obs_) : nlohmann::json();
  j["last_action"] = last_action_ ? nlohmann::json(*last_action_) : nlohmann::json();
  return j;
}

void DoubleQAgent::load(const nlohmann::json& snapshot) {
  check_snapshot(snapshot, kind());
  std::vector<ObservationBins> bins;
  for (const auto& b : snapshot.at("bins")) {
    bins.push_back({b.at("signal"), b.at("lo"), b.at("hi"), b.at("count")});
  }
  auto levels = snapshot.at("action_levels").get<std::vector<std::size_t>>();
  if (bins != config_.bins || levels != config_.action_levels) {
    throw std::invalid_argument("q agent snapshot has a different observation or action grid");
  }
  auto qa = snapshot.at("q_a").get<std::vector<double>>();
  auto qb = snapshot.at("q_b").get<std::vector<double>>();
  if (qa.size() != qa_.size() || qb.size() != qb_.size()) {
    throw std::invalid_argument("q agent snapshot has tables of the wrong size");
  }
  config_.alpha = snapshot.at("alpha");
  config_.gamma = snapshot.at("gamma");
  config_.epsilon_start = snapshot.at("epsilon_start");
  config_.epsilon_end = snapshot.at("epsilon_end");
  config_.epsilon_decay_episodes = snapshot.at("epsilon_decay_episodes");
  episode_budget_ = snapshot.at("episode_budget");
  episodes_ = snapshot.at("episodes");
  qa_ = std::move(qa);
  qb_ = std::move(qb);
  load_rng(rng_, snapshot.at("rng").get<std::string>());
  const auto& lo = snapshot.at("last_obs");
  const auto& la = snapshot.at("last_action");
  last_obs_ = lo.is_null() ? std::nullopt : std::optional<std::size_t>(lo.get<std::size_t>());
  last_action_ = la.is_null() ? std::nullopt : std::optional<std::size_t>(la.get<std::size_t>());
}

}  // namespace stlrl
