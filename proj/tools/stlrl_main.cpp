#include <cmath>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>
#include <spdlog/cfg/env.h>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "stlrl/agents/agent_config.hpp"
#include "stlrl/bench/experiment.hpp"
#include "stlrl/bench/models.hpp"
#include "stlrl/bench/presets.hpp"
#include "stlrl/falsify/falsifier.hpp"
#include "stlrl/oracle/brute_force.hpp"
#include "stlrl/robustness/monitor.hpp"
#include "stlrl/stl/reach.hpp"

namespace {

using namespace stlrl;

struct Sink {
  std::ofstream file;
  std::ostream* out = &std::cout;

  explicit Sink(const std::string& path) {
    if (path.empty() || path == "-") return;
    file.open(path);
    if (!file) throw std::runtime_error("cannot write '" + path + "'");
    out = &file;
  }
};

ParamTable parse_params(const std::vector<std::string>& items) {
  ParamTable t;
  for (const auto& item : items) {
    auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0) {
      throw CLI::ValidationError("--param", "expected NAME=VALUE, got '" + item + "'");
    }
    try {
      std::size_t used = 0;
      std::string value = item.substr(eq + 1);
      t[item.substr(0, eq)] = std::stod(value, &used);
      if (used != value.size()) throw std::invalid_argument(value);
    } catch (const std::logic_error&) {
      throw CLI::ValidationError("--param", "value of '" + item + "' is not a number");
    }
  }
  return t;
}

AgentConfig read_agent(const std::string& agent) {
  if (is_agent_kind(agent)) {
    AgentConfig c;
    c.kind = agent;
    return c;
  }
  std::ifstream in(agent);
  if (!in) throw std::runtime_error("'" + agent + "' is neither an agent kind nor a readable file");
  return agent_config_from_json(nlohmann::json::parse(in));
}

std::string format_rho(const std::optional<double>& rho) {
  return rho ? format_number(*rho) : "";
}

struct FalsifyArgs {
  std::string spec, model = "surrogate-at", agent = "q", out, format = "json", trace_out;
  std::vector<std::string> params;
  double dt = 1.0, t_end = 30.0;
  std::size_t episodes = 200;
  std::uint64_t seed = 0;
  long timeout_ms = 30000;
  bool early_exit = false;
};

int run_falsify(const FalsifyArgs& a) {
  auto pf = load_property(a.spec, parse_params(a.params));
  auto mspec = parse_model_spec(a.model);
  mspec.timeout = std::chrono::milliseconds(a.timeout_ms);
  auto model = make_model_factory(mspec, pf.schema)(a.dt);
  check_signals(pf.schema, model->output_schema());
  AgentContext ctx{model->output_schema(), model->input_bounds(), model->output_ranges(),
                   episode_steps(a.dt, a.t_end), a.episodes};
  auto agent = make_agent(read_agent(a.agent), ctx, a.seed);

  FalsifyOptions opts;
  opts.dt = a.dt;
  opts.t_end = a.t_end;
  opts.episodes = a.episodes;
  opts.seed = a.seed;
  opts.early_exit = a.early_exit;
  opts.keep_traces = !a.trace_out.empty();
  auto result = falsify(*model, *agent, pf.property, opts);

  Sink sink(a.out);
  if (a.format == "json") {
    *sink.out << result_to_json(result).dump(2) << '\n';
  } else {
    *sink.out << "episode,min_rho,falsified,steps\n";
    for (std::size_t k = 0; k < result.episodes.size(); ++k) {
      const auto& e = result.episodes[k];
      *sink.out << k + 1 << ',' << format_number(e.min_robustness) << ','
                << (e.falsified ? 1 : 0) << ',' << e.steps << '\n';
    }
  }
  if (!a.trace_out.empty() && !result.episodes.empty()) {
    const auto& last = result.episodes.back();
    Sink dump(a.trace_out);
    write_robustness_csv(*dump.out, last.trace.times(), last.robustness);
  }
  return result.outcome == Outcome::Aborted ? 1 : 0;
}

struct BenchArgs {
  std::string config, spec, model, out, raw_out, format = "csv";
  std::optional<std::size_t> episodes, trials, jobs;
  std::optional<std::uint64_t> seed;
  bool quiet = false;
};

int run_bench(const BenchArgs& a) {
  auto cfg = load_experiment_config(a.config);
  if (!a.spec.empty()) cfg.property = a.spec;
  if (!a.model.empty()) {
    auto m = parse_model_spec(a.model);
    m.timeout = cfg.model.timeout;
    m.inputs = cfg.model.inputs;
    cfg.model = m;
  }
  if (a.episodes) cfg.episodes = *a.episodes;
  if (a.trials) cfg.trials = *a.trials;
  if (a.jobs) cfg.jobs = *a.jobs;
  if (a.seed) cfg.seed = *a.seed;
  if (!a.out.empty()) cfg.summary_path = a.out;
  if (!a.raw_out.empty()) cfg.raw_path = a.raw_out;

  std::size_t done = 0;
  const std::size_t total = cfg.agents.size() * cfg.dts.size() * cfg.trials;
  auto progress = [&](const TrialRecord& t) {
    ++done;
    if (!a.quiet) {
      spdlog::info("[{}/{}] {} dt={} trial {}: {} after {} episodes", done, total,
                   cfg.agents[t.agent].name, format_number(cfg.dts[t.dt_index]), t.trial,
                   outcome_name(t.outcome), t.episodes);
    }
  };
  auto result = run_experiment(cfg, progress);

  std::ostringstream summary;
  if (a.format == "json") {
    summary << experiment_to_json(cfg, result)["summary"].dump(2) << '\n';
  } else {
    write_summary_csv(summary, result.rows);
  }
  Sink sink(cfg.summary_path);
  *sink.out << summary.str();
  if (!cfg.raw_path.empty()) {
    Sink raw(cfg.raw_path);
    *raw.out << experiment_to_json(cfg, result).dump(2) << '\n';
  }
  return 0;
}

struct TraceArgs {
  std::string spec, trace, out;
  std::vector<std::string> params;
  bool offline = false;
};

int run_monitor(const TraceArgs& a) {
  auto pf = load_property(a.spec, parse_params(a.params));
  auto trace = load_trace_csv(a.trace, pf.schema);
  Sink sink(a.out);
  *sink.out << "time,rho\n";
  if (a.offline) {
    auto rho = robustness_series(pf.property.body(), trace);
    for (std::size_t i = 0; i < trace.size(); ++i) {
      *sink.out << format_number(trace.time(i)) << ',' << format_rho(rho[i]) << '\n';
    }
    return 0;
  }
  Monitor monitor(to_past_dependent(pf.property).body(), pf.schema);
  for (std::size_t i = 0; i < trace.size(); ++i) {
    double rho = monitor.push(trace.time(i), trace.state(i));
    *sink.out << format_number(trace.time(i)) << ',' << format_number(rho) << '\n';
  }
  return 0;
}

int run_oracle(const TraceArgs& a) {
  auto pf = load_property(a.spec, parse_params(a.params));
  auto trace = load_trace_csv(a.trace, pf.schema);
  Sink sink(a.out);
  *sink.out << "time,rho\n";
  for (std::size_t i = 0; i < trace.size(); ++i) {
    *sink.out << format_number(trace.time(i)) << ','
              << format_rho(oracle::robustness(pf.property.body(), trace, i)) << '\n';
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  spdlog::set_default_logger(spdlog::stderr_color_mt("stlrl"));
  spdlog::cfg::load_env_levels();

  CLI::App app{"Falsification of temporal-logic properties with reinforcement learning"};
  app.require_subcommand(1);
  bool verbose = false;
  app.add_flag("-v,--verbose", verbose, "Debug logging");

  FalsifyArgs fa;
  auto* fal = app.add_subcommand("falsify", "Run one falsification");
  fal->add_option("--spec", fa.spec, "Property file or preset name")->required();
  fal->add_option("--model", fa.model, "surrogate-at, echo or external:CMD");
  fal->add_option("--agent", fa.agent, "random, q, sa, ce or an agent config JSON file");
  fal->add_option("--dt", fa.dt, "Input step in seconds")->check(CLI::PositiveNumber);
  fal->add_option("--t-end", fa.t_end, "Episode length in seconds")->check(CLI::PositiveNumber);
  fal->add_option("--episodes", fa.episodes, "Episode budget")->check(CLI::PositiveNumber);
  fal->add_option("--seed", fa.seed, "Agent seed");
  fal->add_option("--param", fa.params, "Override a property parameter, NAME=VALUE");
  fal->add_option("--out", fa.out, "Result file (default stdout)");
  fal->add_option("--format", fa.format, "Result format")->check(CLI::IsMember({"json", "csv"}));
  fal->add_option("--trace-out", fa.trace_out, "Write time,rho of the last episode");
  fal->add_option("--timeout-ms", fa.timeout_ms, "Per-message timeout of external models");
  fal->add_flag("--early-exit", fa.early_exit, "End an episode at the first violation");

  BenchArgs ba;
  auto* bench = app.add_subcommand("bench", "Run a multi-trial experiment");
  bench->add_option("--config", ba.config, "Experiment TOML")->required()->check(CLI::ExistingFile);
  bench->add_option("--spec", ba.spec, "Override the property");
  bench->add_option("--model", ba.model, "Override the model");
  bench->add_option("--episodes", ba.episodes, "Override the episode budget");
  bench->add_option("--trials", ba.trials, "Override trials per cell");
  bench->add_option("--seed", ba.seed, "Override the master seed");
  bench->add_option("--jobs", ba.jobs, "Worker threads (0: all cores)");
  bench->add_option("--out", ba.out, "Summary file (default: config or stdout)");
  bench->add_option("--raw-out", ba.raw_out, "Raw trial records as JSON");
  bench->add_option("--format", ba.format, "Summary format")->check(CLI::IsMember({"json", "csv"}));
  bench->add_flag("-q,--quiet", ba.quiet, "No per-trial progress");

  TraceArgs ma;
  auto* mon = app.add_subcommand("monitor", "Robustness at every sample of a trace CSV");
  mon->add_option("--spec", ma.spec, "Property file or preset name")->required();
  mon->add_option("--trace", ma.trace, "Trace CSV")->required()->check(CLI::ExistingFile);
  mon->add_option("--param", ma.params, "Override a property parameter, NAME=VALUE");
  mon->add_option("--out", ma.out, "Output file (default stdout)");
  mon->add_flag("--offline", ma.offline,
                "Evaluate the body directly; blank where the trace is too short");

  TraceArgs oa;
  auto* orc = app.add_subcommand("oracle", "Brute-force robustness of the body at every sample");
  orc->add_option("--spec", oa.spec, "Property file or preset name")->required();
  orc->add_option("--trace", oa.trace, "Trace CSV")->required()->check(CLI::ExistingFile);
  orc->add_option("--param", oa.params, "Override a property parameter, NAME=VALUE");
  orc->add_option("--out", oa.out, "Output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  if (verbose) spdlog::set_level(spdlog::level::debug);

  try {
    if (*fal) return run_falsify(fa);
    if (*bench) return run_bench(ba);
    if (*mon) return run_monitor(ma);
    if (*orc) return run_oracle(oa);
  } catch (const CLI::ValidationError& e) {
    std::cerr << "stlrl: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "stlrl: " << e.what() << '\n';
    return 1;
  }
  return 2;
}
