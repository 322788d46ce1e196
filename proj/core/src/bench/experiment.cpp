#include "stlrl/bench/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <spdlog/spdlog.h>
#include <toml.hpp>

#include "stlrl/bench/presets.hpp"
#include "stlrl/bench/stats.hpp"
#include "stlrl/stl/formula.hpp"

namespace stlrl {

namespace {

nlohmann::json to_json(const toml::node& node) {
  if (const auto* t = node.as_table()) {
    nlohmann::json j = nlohmann::json::object();
    for (const auto& [key, value] : *t) j[std::string(key.str())] = to_json(value);
    return j;
  }
  if (const auto* a = node.as_array()) {
    nlohmann::json j = nlohmann::json::array();
    for (const auto& value : *a) j.push_back(to_json(value));
    return j;
  }
  if (const auto* s = node.as_string()) return s->get();
  if (const auto* i = node.as_integer()) return i->get();
  if (const auto* f = node.as_floating_point()) return f->get();
  if (const auto* b = node.as_boolean()) return b->get();
  throw std::invalid_argument("unsupported TOML value (dates and times are not used)");
}

void check_keys(const nlohmann::json& table, const std::string& where,
                std::initializer_list<const char*> allowed) {
  std::set<std::string, std::less<>> ok(allowed.begin(), allowed.end());
  for (const auto& [key, _] : table.items()) {
    if (!ok.contains(key)) throw std::invalid_argument("unknown key '" + key + "' in " + where);
  }
}

template <class T>
T get(const nlohmann::json& table, const char* key, const std::string& where, T fallback) {
  auto it = table.find(key);
  if (it == table.end()) return fallback;
  try {
    return it->get<T>();
  } catch (const nlohmann::json::exception&) {
    throw std::invalid_argument("key '" + std::string(key) + "' in " + where + " has the wrong type");
  }
}

std::string resolve(const std::string& base, const std::string& path) {
  if (path.empty()) return path;
  std::filesystem::path p(path);
  if (p.is_absolute()) return path;
  return (std::filesystem::path(base) / p).lexically_normal().string();
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::string format_p(const std::optional<double>& p) {
  if (!p) return "";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", *p);
  return buf;
}

}  // namespace

ExperimentConfig parse_experiment_config(std::string_view toml_text, const std::string& base_dir) {
  nlohmann::json root;
  try {
    root = to_json(toml::parse(toml_text));
  } catch (const toml::parse_error& e) {
    std::ostringstream msg;
    msg << "experiment config: " << e.description() << " at line " << e.source().begin.line
        << ", column " << e.source().begin.column;
    throw std::invalid_argument(msg.str());
  }
  check_keys(root, "config", {"experiment", "property", "model", "agents", "output"});

  ExperimentConfig c;
  const auto exp = root.value("experiment", nlohmann::json::object());
  check_keys(exp, "[experiment]", {"name", "episodes", "trials", "seed", "dt", "t_end", "jobs",
                                   "early_exit", "bool_magnitude"});
  c.name = get<std::string>(exp, "name", "[experiment]", c.name);
  c.episodes = get<std::size_t>(exp, "episodes", "[experiment]", c.episodes);
  c.trials = get<std::size_t>(exp, "trials", "[experiment]", c.trials);
  c.seed = get<std::uint64_t>(exp, "seed", "[experiment]", c.seed);
  c.t_end = get<double>(exp, "t_end", "[experiment]", c.t_end);
  c.jobs = get<std::size_t>(exp, "jobs", "[experiment]", c.jobs);
  c.early_exit = get<bool>(exp, "early_exit", "[experiment]", c.early_exit);
  c.bool_magnitude = get<double>(exp, "bool_magnitude", "[experiment]", c.bool_magnitude);
  if (auto it = exp.find("dt"); it != exp.end()) {
    if (it->is_number()) {
      c.dts = {it->get<double>()};
    } else {
      c.dts = get<std::vector<double>>(exp, "dt", "[experiment]", {});
    }
  }

  const auto prop = root.value("property", nlohmann::json::object());
  check_keys(prop, "[property]", {"preset", "file", "params"});
  if (prop.contains("preset") == prop.contains("file")) {
    throw std::invalid_argument("[property] needs exactly one of 'preset' or 'file'");
  }
  c.property = prop.contains("preset")
                   ? get<std::string>(prop, "preset", "[property]", "")
                   : resolve(base_dir, get<std::string>(prop, "file", "[property]", ""));
  const auto params = prop.value("params", nlohmann::json::object());
  for (const auto& [key, value] : params.items()) {
    if (!value.is_number()) throw std::invalid_argument("param '" + key + "' must be a number");
    c.params[key] = value.get<double>();
  }

  const auto model = root.value("model", nlohmann::json::object());
  check_keys(model, "[model]", {"kind", "command", "timeout_ms", "inputs"});
  c.model.kind = get<std::string>(model, "kind", "[model]", c.model.kind);
  c.model.command = get<std::string>(model, "command", "[model]", "");
  c.model.timeout = std::chrono::milliseconds(
      get<std::int64_t>(model, "timeout_ms", "[model]", c.model.timeout.count()));
  for (const auto& in : model.value("inputs", nlohmann::json::array())) {
    check_keys(in, "[[model.inputs]]", {"name", "lo", "hi"});
    InputBound b{get<double>(in, "lo", "[[model.inputs]]", 0.0),
                 get<double>(in, "hi", "[[model.inputs]]", 1.0)};
    if (!(b.lo <= b.hi)) throw std::invalid_argument("[[model.inputs]] needs lo <= hi");
    c.model.inputs.emplace_back(get<std::string>(in, "name", "[[model.inputs]]", "u"), b);
  }

  for (const auto& a : root.value("agents", nlohmann::json::array())) {
    AgentEntry e;
    e.config = agent_config_from_json(a);
    e.name = get<std::string>(a, "name", "[[agents]]", e.config.kind);
    e.group = get<std::string>(a, "group", "[[agents]]", e.config.kind == "q" ? "ours" : "baseline");
    if (e.group != "ours" && e.group != "baseline") {
      throw std::invalid_argument("agent group must be 'ours' or 'baseline', got '" + e.group + "'");
    }
    c.agents.push_back(std::move(e));
  }

  const auto out = root.value("output", nlohmann::json::object());
  check_keys(out, "[output]", {"summary", "raw"});
  c.summary_path = resolve(base_dir, get<std::string>(out, "summary", "[output]", ""));
  c.raw_path = resolve(base_dir, get<std::string>(out, "raw", "[output]", ""));

  if (c.trials == 0) throw std::invalid_argument("[experiment] trials must be at least 1");
  if (c.episodes == 0) throw std::invalid_argument("[experiment] episodes must be at least 1");
  if (c.dts.empty()) throw std::invalid_argument("[experiment] dt list is empty");
  for (double dt : c.dts) {
    if (!(dt > 0.0)) throw std::invalid_argument("[experiment] dt values must be positive");
  }
  if (!(c.t_end > 0.0)) throw std::invalid_argument("[experiment] t_end must be positive");
  if (c.agents.empty()) throw std::invalid_argument("config needs at least one [[agents]] entry");
  return c;
}

ExperimentConfig load_experiment_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open experiment config '" + path + "'");
  std::ostringstream text;
  text << in.rdbuf();
  auto base = std::filesystem::path(path).parent_path().string();
  return parse_experiment_config(text.str(), base.empty() ? "." : base);
}

std::uint64_t trial_seed(std::uint64_t master, std::size_t agent, std::size_t dt_index,
                         std::size_t trial) {
  std::uint64_t s = splitmix64(master);
  s = splitmix64(s ^ agent);
  s = splitmix64(s ^ dt_index);
  return splitmix64(s ^ trial);
}

bool better_cell(const CellSummary& a, const CellSummary& b) {
  if (a.success_rate != b.success_rate) return a.success_rate > b.success_rate;
  if (a.median_episodes != b.median_episodes) return a.median_episodes < b.median_episodes;
  return a.dt < b.dt;
}

std::string significance_mark(double p) {
  if (p < 0.001) return "**";
  if (p < 0.05) return "*";
  return "";
}

CellSummary summarize_cell(std::size_t agent, std::size_t dt_index, double dt,
                           const std::vector<TrialRecord>& trials, std::size_t budget) {
  CellSummary cell;
  cell.agent = agent;
  cell.dt_index = dt_index;
  cell.dt = dt;
  for (const auto& t : trials) {
    if (t.agent != agent || t.dt_index != dt_index) continue;
    ++cell.trials;
    if (t.success) ++cell.successes;
    cell.episodes.push_back(capped_episodes(t.success, t.episodes, budget));
  }
  if (cell.trials > 0) {
    cell.success_rate = static_cast<double>(cell.successes) / static_cast<double>(cell.trials);
    cell.median_episodes = median(cell.episodes);
  }
  return cell;
}

std::vector<SummaryRow> summarize(const ExperimentConfig& config,
                                  const std::vector<CellSummary>& cells) {
  // Best cell per agent.
  std::vector<const CellSummary*> best(config.agents.size(), nullptr);
  for (const auto& cell : cells) {
    auto& b = best.at(cell.agent);
    if (!b || better_cell(cell, *b)) b = &cell;
  }
  // Best agent per group.
  const CellSummary* best_ours = nullptr;
  const CellSummary* best_base = nullptr;
  for (std::size_t a = 0; a < best.size(); ++a) {
    if (!best[a]) continue;
    auto& g = config.agents[a].group == "ours" ? best_ours : best_base;
    if (!g || better_cell(*best[a], *g)) g = best[a];
  }

  auto compare = [](const CellSummary& x, const CellSummary& y) {
    std::pair<double, double> p;
    p.first = fisher_exact(x.successes, x.trials - x.successes, y.successes,
                           y.trials - y.successes);
    p.second = mann_whitney_u(x.episodes, y.episodes).p;
    return p;
  };

  const std::string label = property_label(config.property);
  std::vector<SummaryRow> rows;
  for (std::size_t a = 0; a < best.size(); ++a) {
    if (!best[a]) continue;
    const auto& cell = *best[a];
    SummaryRow row;
    row.property = label;
    row.agent = config.agents[a].name;
    row.group = config.agents[a].group;
    row.dt = cell.dt;
    row.success_rate = cell.success_rate;
    row.median_episodes = cell.median_episodes;
    const CellSummary* other = row.group == "ours" ? best_base : best_ours;
    if (other) {
      auto [pf, pm] = compare(cell, *other);
      row.p_fisher = pf;
      row.p_mwu = pm;
      if (&cell == best_ours) {
        std::vector<std::string> marks;
        if (cell.success_rate > other->success_rate && !significance_mark(pf).empty()) {
          marks.push_back("rate" + significance_mark(pf));
        }
        if (cell.median_episodes < other->median_episodes && !significance_mark(pm).empty()) {
          marks.push_back("episodes" + significance_mark(pm));
        }
        for (std::size_t k = 0; k < marks.size(); ++k) {
          row.marks += (k ? ";" : "") + marks[k];
        }
      }
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

ExperimentResult run_experiment(const ExperimentConfig& config, const TrialCallback& on_trial) {
  const PropertyFile pf = load_property(config.property, config.params);
  const ModelFactory factory = make_model_factory(config.model, pf.schema);
  // Fail fast on an unusable model or agent configuration.
  for (double dt : config.dts) {
    (void)episode_steps(dt, config.t_end);
  }
  if (config.model.kind != "external") check_signals(pf.schema, factory(config.dts.front())->output_schema());

  const std::size_t per_agent = config.dts.size() * config.trials;
  const std::size_t total = config.agents.size() * per_agent;
  ExperimentResult result;
  result.trials.resize(total);

  auto run_trial = [&](std::size_t index) {
    TrialRecord rec;
    rec.agent = index / per_agent;
    rec.dt_index = (index % per_agent) / config.trials;
    rec.trial = index % config.trials;
    rec.seed = trial_seed(config.seed, rec.agent, rec.dt_index, rec.trial);
    const double dt = config.dts[rec.dt_index];
    try {
      auto model = factory(dt);
      check_signals(pf.schema, model->output_schema());
      AgentContext ctx{model->output_schema(), model->input_bounds(), model->output_ranges(),
                       episode_steps(dt, config.t_end), config.episodes};
      auto agent = make_agent(config.agents[rec.agent].config, ctx, rec.seed);
      FalsifyOptions opts;
      opts.dt = dt;
      opts.t_end = config.t_end;
      opts.episodes = config.episodes;
      opts.early_exit = config.early_exit;
      opts.keep_traces = false;
      opts.robustness.bool_magnitude = config.bool_magnitude;
      opts.seed = rec.seed;
      auto r = falsify(*model, *agent, pf.property, opts);
      rec.outcome = r.outcome;
      rec.success = r.outcome == Outcome::Falsified;
      rec.episodes = rec.success ? *r.episode_index : config.episodes;
      rec.wall_ms = r.wall_ms;
      rec.error = r.error;
    } catch (const std::exception& e) {
      rec.outcome = Outcome::Aborted;
      rec.episodes = config.episodes;
      rec.error = e.what();
    }
    if (rec.error) {
      spdlog::warn("trial {} of agent '{}' at dt={} failed: {}", rec.trial,
                   config.agents[rec.agent].name, format_number(dt), *rec.error);
    }
    return rec;
  };

  std::size_t jobs = config.jobs ? config.jobs : std::max(1u, std::thread::hardware_concurrency());
  jobs = std::min(jobs, total);
  std::atomic<std::size_t> next{0};
  std::mutex callback_mutex;
  auto worker = [&] {
    for (std::size_t i = next++; i < total; i = next++) {
      result.trials[i] = run_trial(i);
      if (on_trial) {
        std::lock_guard lock(callback_mutex);
        on_trial(result.trials[i]);
      }
    }
  };
  if (jobs <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t j = 0; j < jobs; ++j) pool.emplace_back(worker);
  }

  for (std::size_t a = 0; a < config.agents.size(); ++a) {
    for (std::size_t d = 0; d < config.dts.size(); ++d) {
      result.cells.push_back(summarize_cell(a, d, config.dts[d], result.trials, config.episodes));
    }
  }
  result.rows = summarize(config, result.cells);
  return result;
}

void write_summary_csv(std::ostream& out, const std::vector<SummaryRow>& rows) {
  out << "property,agent,dt,success_rate,median_episodes,p_fisher,p_mwu,marks\n";
  for (const auto& r : rows) {
    out << r.property << ',' << r.agent << ',' << format_number(r.dt) << ','
        << format_number(r.success_rate) << ',' << format_number(r.median_episodes) << ','
        << format_p(r.p_fisher) << ',' << format_p(r.p_mwu) << ',' << r.marks << '\n';
  }
}

nlohmann::json experiment_to_json(const ExperimentConfig& config, const ExperimentResult& result) {
  nlohmann::json j;
  j["name"] = config.name;
  j["property"] = config.property;
  j["seed"] = config.seed;
  j["episodes"] = config.episodes;
  j["trials_per_cell"] = config.trials;
  j["t_end"] = config.t_end;
  j["dt"] = config.dts;
  nlohmann::json agents = nlohmann::json::array();
  for (const auto& a : config.agents) {
    auto cfg = agent_config_to_json(a.config);
    cfg["name"] = a.name;
    cfg["group"] = a.group;
    agents.push_back(cfg);
  }
  j["agents"] = agents;
  nlohmann::json trials = nlohmann::json::array();
  for (const auto& t : result.trials) {
    nlohmann::json r = {{"agent", config.agents[t.agent].name},
                        {"dt", config.dts[t.dt_index]},
                        {"trial", t.trial},
                        {"seed", t.seed},
                        {"outcome", outcome_name(t.outcome)},
                        {"episodes", t.episodes},
                        {"wall_ms", t.wall_ms}};
    if (t.error) r["error"] = *t.error;
    trials.push_back(r);
  }
  j["trials"] = trials;
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& r : result.rows) {
    rows.push_back({{"property", r.property},
                    {"agent", r.agent},
                    {"group", r.group},
                    {"dt", r.dt},
                    {"success_rate", r.success_rate},
                    {"median_episodes", r.median_episodes},
                    {"p_fisher", r.p_fisher ? nlohmann::json(*r.p_fisher) : nlohmann::json()},
                    {"p_mwu", r.p_mwu ? nlohmann::json(*r.p_mwu) : nlohmann::json()},
                    {"marks", r.marks}});
  }
  j["summary"] = rows;
  return j;
}

}  // namespace stlrl
