#include "stlrl/agents/agent_config.hpp"

#include <set>
#include <stdexcept>

namespace stlrl {

namespace {

const std::set<std::string, std::less<>> kKnownKeys = {
    "kind",          "seed",          "name",
    "group",         "bins",          "action_levels",
    "alpha",         "gamma",         "epsilon_start",
    "epsilon_end",   "epsilon_decay_episodes",
    "temperature",   "cooling",       "step_fraction",
    "coordinate_probability",        "population",
    "elite_fraction", "sigma_floor",  "initial_sigma",
    "sigma_smoothing",
};

template <class T>
void read(const nlohmann::json& j, const char* key, T& out) {
  if (auto it = j.find(key); it != j.end()) {
    try {
      out = it->get<T>();
    } catch (const nlohmann::json::exception&) {
      throw std::invalid_argument(std::string("agent option '") + key + "' has the wrong type");
    }
  }
}

}  // namespace

bool is_agent_kind(std::string_view kind) {
  return kind == "random" || kind == "q" || kind == "sa" || kind == "ce";
}

AgentConfig agent_config_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw std::invalid_argument("agent config must be a table");
  for (const auto& [key, _] : j.items()) {
    if (!kKnownKeys.contains(key)) throw std::invalid_argument("unknown agent option '" + key + "'");
  }
  AgentConfig c;
  read(j, "kind", c.kind);
  if (!is_agent_kind(c.kind)) throw std::invalid_argument("unknown agent kind '" + c.kind + "'");
  if (j.contains("seed")) {
    std::uint64_t s = 0;
    read(j, "seed", s);
    c.seed = s;
  }

  if (auto it = j.find("bins"); it != j.end()) {
    if (it->is_number_integer()) {
      c.q.default_bins = it->get<std::size_t>();
    } else if (it->is_array()) {
      for (const auto& b : *it) {
        ObservationBins ob;
        ob.signal = b.at("signal").get<std::string>();
        ob.lo = b.at("lo").get<double>();
        ob.hi = b.at("hi").get<double>();
        ob.count = b.value("count", c.q.default_bins);
        c.q.bins.push_back(ob);
      }
    } else {
      throw std::invalid_argument("agent option 'bins' must be a count or a list of tables");
    }
  }
  read(j, "action_levels", c.q.action_levels);
  read(j, "alpha", c.q.alpha);
  read(j, "gamma", c.q.gamma);
  read(j, "epsilon_start", c.q.epsilon_start);
  read(j, "epsilon_end", c.q.epsilon_end);
  read(j, "epsilon_decay_episodes", c.q.epsilon_decay_episodes);

  read(j, "temperature", c.sa.initial_temperature);
  read(j, "cooling", c.sa.cooling);
  read(j, "step_fraction", c.sa.step_fraction);
  read(j, "coordinate_probability", c.sa.coordinate_probability);

  read(j, "population", c.ce.population);
  read(j, "elite_fraction", c.ce.elite_fraction);
  read(j, "sigma_floor", c.ce.sigma_floor_fraction);
  read(j, "initial_sigma", c.ce.initial_sigma_fraction);
  read(j, "sigma_smoothing", c.ce.sigma_smoothing);
  return c;
}

nlohmann::json agent_config_to_json(const AgentConfig& c) {
  nlohmann::json j = {{"kind", c.kind}};
  if (c.seed) j["seed"] = *c.seed;
  if (c.kind == "q") {
    if (c.q.bins.empty()) {
      j["bins"] = c.q.default_bins;
    } else {
      nlohmann::json bins = nlohmann::json::array();
      for (const auto& b : c.q.bins) {
        bins.push_back({{"signal", b.signal}, {"lo", b.lo}, {"hi", b.hi}, {"count", b.count}});
      }
      j["bins"] = bins;
    }
    if (!c.q.action_levels.empty()) j["action_levels"] = c.q.action_levels;
    j["alpha"] = c.q.alpha;
    j["gamma"] = c.q.gamma;
    j["epsilon_start"] = c.q.epsilon_start;
    j["epsilon_end"] = c.q.epsilon_end;
    j["epsilon_decay_episodes"] = c.q.epsilon_decay_episodes;
  } else if (c.kind == "sa") {
    j["temperature"] = c.sa.initial_temperature;
    j["cooling"] = c.sa.cooling;
    j["step_fraction"] = c.sa.step_fraction;
    j["coordinate_probability"] = c.sa.coordinate_probability;
  } else if (c.kind == "ce") {
    j["population"] = c.ce.population;
    j["elite_fraction"] = c.ce.elite_fraction;
    j["sigma_floor"] = c.ce.sigma_floor_fraction;
    j["initial_sigma"] = c.ce.initial_sigma_fraction;
    j["sigma_smoothing"] = c.ce.sigma_smoothing;
  }
  return j;
}

std::unique_ptr<Agent> make_agent(const AgentConfig& config, const AgentContext& context,
                                  std::uint64_t seed) {
  if (config.seed) seed = *config.seed;
  if (config.kind == "random") return std::make_unique<RandomAgent>(context.bounds, seed);
  if (config.kind == "q") return std::make_unique<DoubleQAgent>(config.q, context, seed);
  if (config.kind == "sa") {
    return std::make_unique<AnnealingAgent>(config.sa, context.bounds, context.steps_per_episode,
                                            seed);
  }
  if (config.kind == "ce") {
    return std::make_unique<CrossEntropyAgent>(config.ce, context.bounds,
                                               context.steps_per_episode, seed);
  }
  throw std::invalid_argument("unknown agent kind '" + config.kind + "'");
}

}  // namespace stlrl
