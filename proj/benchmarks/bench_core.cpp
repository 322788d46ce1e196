#include <benchmark/benchmark.h>

#include <random>

#include "stlrl/bench/presets.hpp"
#include "stlrl/falsify/falsifier.hpp"
#include "stlrl/robustness/monitor.hpp"
#include "stlrl/stl/reach.hpp"
#include "stlrl/system/surrogate_at.hpp"

using namespace stlrl;

namespace {

Trace surrogate_trace(std::size_t steps, double dt) {
  SurrogateAt m;
  std::mt19937_64 rng(1);
  InputSignal u(dt, 2);
  for (std::size_t k = 0; k < steps; ++k) {
    u.push_back(std::vector<double>{std::uniform_real_distribution<double>(0, 100)(rng),
                                    std::uniform_real_distribution<double>(0, 50)(rng)});
  }
  return run_signal(m, u);
}

void BM_RobustnessSeries(benchmark::State& state) {
  auto pf = load_preset("phi6");
  auto trace = surrogate_trace(static_cast<std::size_t>(state.range(0)), 0.5);
  for (auto _ : state) benchmark::DoNotOptimize(robustness_series(pf.property.body(), trace));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_RobustnessSeries)->Arg(200)->Arg(2000);

void BM_MonitorPush(benchmark::State& state) {
  auto pf = load_preset("phi8");
  auto body = to_past_dependent(pf.property, 0.5).body();
  auto trace = surrogate_trace(2000, 0.5);
  for (auto _ : state) {
    Monitor m(body, trace.schema());
    for (std::size_t i = 0; i < trace.size(); ++i) {
      benchmark::DoNotOptimize(m.push(trace.time(i), trace.state(i)));
    }
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(trace.size()));
}
BENCHMARK(BM_MonitorPush);

void BM_SurrogateStep(benchmark::State& state) {
  SurrogateAt m;
  m.reset();
  const std::vector<double> u = {60.0, 0.0};
  for (auto _ : state) benchmark::DoNotOptimize(m.step(u, 1.0));
}
BENCHMARK(BM_SurrogateStep);

void BM_FalsifyEpisode(benchmark::State& state) {
  auto pf = load_preset("phi7");
  SurrogateAt m;
  RandomAgent agent(m.input_bounds(), 3);
  FalsifyOptions o;
  o.dt = 5.0;
  o.t_end = 100.0;
  for (auto _ : state) benchmark::DoNotOptimize(run_episode(m, agent, pf.property, o));
}
BENCHMARK(BM_FalsifyEpisode);

}  // namespace

BENCHMARK_MAIN();
