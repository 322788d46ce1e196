#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <random>

#include "stlrl/agents/agent_config.hpp"
#include "stlrl/system/surrogate_at.hpp"

using namespace stlrl;

namespace {

AgentContext at_context(std::size_t steps = 20, std::size_t budget = 200) {
  SurrogateAt m;
  return {m.output_schema(), m.input_bounds(), m.output_ranges(), steps, budget};
}

// One real observation "s" with `states` bins over [0, states), one input
// channel with `actions` levels over [0, 1].
AgentContext grid_context(std::size_t budget = 100) {
  SignalSchema s;
  s.add("s", SignalKind::Real);
  return {s, {{0.0, 1.0}}, {{0.0, 2.0}}, 10, budget};
}

DoubleQConfig grid_config(std::size_t states, std::size_t actions) {
  DoubleQConfig c;
  c.bins = {{"s", 0.0, static_cast<double>(states), states}};
  c.action_levels = {actions};
  return c;
}

std::vector<double> state_of(double s) { return {s}; }

// Runs an episode optimizer against min-rho = sum |theta_i - c_i| on a
// synthetic model with one [0,1] channel and `dim` steps. Returns true when
// the objective drops below 0.1 within `budget` episodes.
bool solves_synthetic(Agent& agent, const std::vector<double>& target, std::size_t budget) {
  const std::vector<double> x = {0.0};
  for (std::size_t ep = 0; ep < budget; ++ep) {
    double obj = 0.0;
    for (std::size_t i = 0; i < target.size(); ++i) {
      obj += std::abs(agent.step(x, 0.0)[0] - target[i]);
    }
    if (obj < 0.1) return true;
    agent.episode_finished(obj);
    agent.reset(x, 0.0);
  }
  return false;
}

template <class MakeAgent>
int synthetic_successes(std::size_t dim, MakeAgent make) {
  int ok = 0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    std::mt19937_64 rng(1000 + seed);
    std::vector<double> target(dim);
    for (auto& c : target) c = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
    auto agent = make(dim, seed);
    ok += solves_synthetic(*agent, target, 200) ? 1 : 0;
  }
  return ok;
}

auto make_sa = [](std::size_t dim, std::uint64_t seed) {
  return std::make_unique<AnnealingAgent>(AnnealingConfig{}, std::vector<InputBound>{{0, 1}}, dim,
                                          seed);
};
auto make_ce = [](std::size_t dim, std::uint64_t seed) {
  return std::make_unique<CrossEntropyAgent>(CrossEntropyConfig{},
                                             std::vector<InputBound>{{0, 1}}, dim, seed);
};

}  // namespace

TEST(RandomAgent, StaysInBoundsAndIsReproducible) {
  RandomAgent a({{0, 100}, {0, 325}}, 9), b({{0, 100}, {0, 325}}, 9);
  std::vector<double> x = {0};
  for (int i = 0; i < 10000; ++i) {
    auto u = a.step(x, 0.0);
    ASSERT_EQ(u, b.step(x, 0.0));
    ASSERT_GE(u[0], 0.0);
    ASSERT_LE(u[0], 100.0);
    ASSERT_GE(u[1], 0.0);
    ASSERT_LE(u[1], 325.0);
  }
}

TEST(RandomAgent, ChannelMeansNearMidpoints) {
  RandomAgent a({{0, 100}, {0, 325}}, 10);
  std::vector<double> x = {0};
  double s0 = 0, s1 = 0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    auto u = a.step(x, 0.0);
    s0 += u[0];
    s1 += u[1];
  }
  EXPECT_NEAR(s0 / n, 50.0, 0.02 * 50.0);
  EXPECT_NEAR(s1 / n, 162.5, 0.02 * 162.5);
}

TEST(DoubleQ, HandComputedUpdate) {
  DoubleQConfig c = grid_config(2, 2);
  c.alpha = 0.5;
  c.gamma = 0.9;
  DoubleQAgent q(c, grid_context(), 1);
  // Greedy action of Q_A in the next state is 1; Q_B values it at 2.
  q.set_q(DoubleQAgent::Table::A, 1, 1, 1.0);
  q.set_q(DoubleQAgent::Table::B, 1, 1, 2.0);
  q.set_q(DoubleQAgent::Table::B, 1, 0, -7.0);
  q.update(DoubleQAgent::Table::A, 0, 0, 1.0, 1);
  EXPECT_DOUBLE_EQ(q.q(DoubleQAgent::Table::A, 0, 0), 1.4);
  EXPECT_EQ(q.q(DoubleQAgent::Table::B, 0, 0), 0.0);

  // Roles swap for B: argmax of Q_B in state 1 is action 1, valued by Q_A at 1.
  q.update(DoubleQAgent::Table::B, 0, 1, 1.0, 1);
  EXPECT_DOUBLE_EQ(q.q(DoubleQAgent::Table::B, 0, 1), 0.5 * (1.0 + 0.9 * 1.0));

  // Terminal transition: no bootstrap.
  q.update(DoubleQAgent::Table::A, 1, 0, 3.0, std::nullopt);
  EXPECT_DOUBLE_EQ(q.q(DoubleQAgent::Table::A, 1, 0), 1.5);
}

TEST(DoubleQ, GreedyStepReturnsTheUniqueArgmax) {
  DoubleQConfig c = grid_config(2, 5);
  c.epsilon_start = c.epsilon_end = 0.0;
  DoubleQAgent q(c, grid_context(), 3);
  q.set_q(DoubleQAgent::Table::A, 1, 3, 0.25);
  q.set_q(DoubleQAgent::Table::B, 1, 3, 0.25);
  q.set_q(DoubleQAgent::Table::A, 1, 4, 0.4);
  for (int i = 0; i < 50; ++i) {
    EXPECT_EQ(q.step(state_of(1.5), 0.0), q.action_values(3));
    q.reset(state_of(1.5), 0.0);
    // Undo the terminal update so the table stays as set.
    q.set_q(DoubleQAgent::Table::A, 1, 3, 0.25);
    q.set_q(DoubleQAgent::Table::B, 1, 3, 0.25);
  }
  EXPECT_EQ(q.action_values(0), std::vector<double>{0.0});
  EXPECT_EQ(q.action_values(2), std::vector<double>{0.5});
  EXPECT_EQ(q.action_values(4), std::vector<double>{1.0});
}

TEST(DoubleQ, ObservationBinning) {
  DoubleQAgent q(grid_config(2, 2), grid_context(), 1);
  EXPECT_EQ(q.observation_count(), 2u);
  EXPECT_EQ(q.observe(state_of(-5)), 0u);
  EXPECT_EQ(q.observe(state_of(0.99)), 0u);
  EXPECT_EQ(q.observe(state_of(1.0)), 1u);
  EXPECT_EQ(q.observe(state_of(99)), 1u);

  DoubleQAgent at(DoubleQConfig{}, at_context(), 1);
  // Default: 8 bins over each real output with a known range (v, w, g), 5x5 actions.
  EXPECT_EQ(at.observation_count(), 8u * 8u * 8u);
  EXPECT_EQ(at.action_count(), 25u);
}

TEST(DoubleQ, EpsilonAnnealsOverHalfTheBudget) {
  DoubleQAgent q(grid_config(2, 2), grid_context(100), 1);
  std::vector<double> x = {0};
  EXPECT_DOUBLE_EQ(q.epsilon(), 1.0);
  for (int e = 0; e < 25; ++e) q.reset(x, 0.0);
  EXPECT_DOUBLE_EQ(q.epsilon(), 1.0 + (0.05 - 1.0) * 0.5);
  for (int e = 0; e < 25; ++e) q.reset(x, 0.0);
  EXPECT_NEAR(q.epsilon(), 0.05, 1e-12);
  for (int e = 0; e < 50; ++e) q.reset(x, 0.0);
  EXPECT_NEAR(q.epsilon(), 0.05, 1e-12);
}

TEST(DoubleQ, ChainConvergesToValueIteration) {
  // Two states, two actions, deterministic: action 1 moves to state 1,
  // action 0 to state 0. Rewards r(s, a).
  const double reward[2][2] = {{0.0, 1.0}, {0.5, 2.0}};
  const double gamma = 0.9;
  double qstar[2][2] = {};
  for (int it = 0; it < 2000; ++it) {
    double next[2][2];
    for (int s = 0; s < 2; ++s) {
      for (int a = 0; a < 2; ++a) {
        int s2 = a;
        next[s][a] = reward[s][a] + gamma * std::max(qstar[s2][0], qstar[s2][1]);
      }
    }
    std::copy(&next[0][0], &next[0][0] + 4, &qstar[0][0]);
  }

  DoubleQConfig c = grid_config(2, 2);
  c.alpha = 0.5;
  c.gamma = gamma;
  DoubleQAgent q(c, grid_context(), 7);
  std::mt19937_64 behaviour(8);
  std::size_t s = 0;
  for (int step = 0; step < 10000; ++step) {
    std::size_t a = std::uniform_int_distribution<std::size_t>(0, 1)(behaviour);
    std::size_t s2 = a;
    q.learn(s, a, reward[s][a], s2);
    s = s2;
  }
  for (std::size_t st = 0; st < 2; ++st) {
    for (std::size_t a = 0; a < 2; ++a) {
      double mean = 0.5 * (q.q(DoubleQAgent::Table::A, st, a) + q.q(DoubleQAgent::Table::B, st, a));
      EXPECT_NEAR(mean, qstar[st][a], 1e-3) << "s=" << st << " a=" << a;
      EXPECT_NEAR(q.q(DoubleQAgent::Table::A, st, a), qstar[st][a], 1e-3);
    }
  }
}

TEST(DoubleQ, BanditArgmaxDoesNotDependOnTableSelection) {
  DoubleQConfig c = grid_config(1, 2);
  c.bins = {{"s", 0.0, 1.0, 1}};
  c.alpha = 0.05;
  std::vector<double> values[2];
  for (std::uint64_t seed : {1u, 2u}) {
    DoubleQAgent q(c, grid_context(), seed);
    std::mt19937_64 stream(99);
    std::normal_distribution<double> noise(0.0, 1.0);
    for (int i = 0; i < 10000; ++i) {
      std::size_t a = static_cast<std::size_t>(i % 2);
      q.learn(0, a, (a == 0 ? 1.0 : 0.0) + noise(stream), std::nullopt);
    }
    EXPECT_EQ(q.greedy_action(0), 0u) << "seed " << seed;
    values[seed - 1] = {q.q(DoubleQAgent::Table::A, 0, 0), q.q(DoubleQAgent::Table::A, 0, 1)};
  }
  EXPECT_NE(values[0], values[1]);
}

TEST(DoubleQ, TiesAreBrokenAtRandom) {
  DoubleQAgent q(grid_config(1, 4), grid_context(), 5);
  std::map<std::size_t, int> seen;
  for (int i = 0; i < 400; ++i) ++seen[q.greedy_action(0)];
  EXPECT_EQ(seen.size(), 4u);
}

TEST(DoubleQ, RejectsBadConfig) {
  auto ctx = grid_context();
  auto bad = grid_config(2, 2);
  bad.alpha = 0.0;
  EXPECT_THROW(DoubleQAgent(bad, ctx, 1), std::invalid_argument);
  bad = grid_config(2, 2);
  bad.epsilon_end = 1.5;
  EXPECT_THROW(DoubleQAgent(bad, ctx, 1), std::invalid_argument);
  bad = grid_config(2, 2);
  bad.bins[0].signal = "nope";
  EXPECT_THROW(DoubleQAgent(bad, ctx, 1), std::invalid_argument);
  bad = grid_config(2, 2);
  bad.action_levels = {2, 2};
  EXPECT_THROW(DoubleQAgent(bad, ctx, 1), std::invalid_argument);
}

TEST(Annealing, MetropolisRule) {
  EXPECT_TRUE(AnnealingAgent::accept(-1.0, 1.0, 0.999));
  EXPECT_TRUE(AnnealingAgent::accept(0.0, 1e-300, 0.999));
  EXPECT_FALSE(AnnealingAgent::accept(1.0, 1e-12, 0.0));
  EXPECT_FALSE(AnnealingAgent::accept(1.0, 0.0, 0.0));
  // exp(-1) ~ 0.3679
  EXPECT_TRUE(AnnealingAgent::accept(1.0, 1.0, 0.36));
  EXPECT_FALSE(AnnealingAgent::accept(1.0, 1.0, 0.37));
}

TEST(Annealing, CoolsGeometricallyAndKeepsImprovements) {
  AnnealingAgent sa({}, {{0, 1}}, 3, 4);
  std::vector<double> x = {0};
  auto episode = [&](double objective) {
    std::vector<double> theta;
    for (int i = 0; i < 3; ++i) theta.push_back(sa.step(x, 0.0)[0]);
    EXPECT_EQ(theta, sa.candidate());
    sa.episode_finished(objective);
    sa.reset(x, 0.0);
    return theta;
  };
  EXPECT_DOUBLE_EQ(sa.temperature(), 1.0);
  auto first = episode(5.0);
  EXPECT_EQ(sa.current(), first);
  EXPECT_DOUBLE_EQ(sa.temperature(), 1.0);  // the first episode only scores the start point
  auto second = episode(4.0);
  EXPECT_EQ(sa.current(), second);
  EXPECT_EQ(sa.current_objective(), 4.0);
  EXPECT_DOUBLE_EQ(sa.temperature(), 0.97);
  // Proposals differ from the current point in at least one coordinate.
  EXPECT_NE(sa.candidate(), sa.current());
  for (int k = 0; k < 10; ++k) episode(3.0 - k);
  EXPECT_NEAR(sa.temperature(), std::pow(0.97, 11), 1e-15);
  EXPECT_EQ(sa.current_objective(), 3.0 - 9);
}

TEST(Annealing, StepHoldsTheLastParameterPastTheHorizon) {
  AnnealingAgent sa({}, {{0, 1}, {10, 20}}, 2, 4);
  std::vector<double> x = {0};
  auto a = sa.step(x, 0.0);
  auto b = sa.step(x, 0.0);
  auto c = sa.step(x, 0.0);
  EXPECT_EQ(a, (std::vector<double>{sa.candidate()[0], sa.candidate()[1]}));
  EXPECT_EQ(b, (std::vector<double>{sa.candidate()[2], sa.candidate()[3]}));
  EXPECT_EQ(c, b);
}

TEST(Annealing, ObjectiveFallsBackToTheBestReward) {
  // Without a reported minimum the objective is -log1p(max reward).
  AnnealingAgent sa({}, {{0, 1}}, 2, 4);
  std::vector<double> x = {0};
  sa.step(x, 0.0);  // first reward is the placeholder 0 and is ignored
  sa.step(x, std::expm1(-2.0));
  sa.reset(x, std::expm1(-3.0));
  EXPECT_NEAR(sa.current_objective(), 2.0, 1e-12);
}

TEST(CrossEntropy, RefitOfIdenticalElitesIsExact) {
  CrossEntropyConfig unsmoothed;
  unsmoothed.sigma_smoothing = 1.0;
  CrossEntropyAgent ce(unsmoothed, {{0, 100}, {0, 325}}, 3, 5);
  std::vector<double> star = {12.345678901234567, 300.1, 0.1, 99.99, 1e-9, 7.0};
  ce.refit({star, star});
  EXPECT_EQ(ce.mean(), star);
  for (std::size_t i = 0; i < star.size(); ++i) {
    EXPECT_EQ(ce.sigma()[i], 0.01 * (i % 2 == 0 ? 100.0 : 325.0));
  }
  // Smoothing only slows the sigma collapse; the mean is still exact.
  CrossEntropyAgent smoothed({}, {{0, 100}, {0, 325}}, 3, 5);
  auto before = smoothed.sigma();
  smoothed.refit({star, star});
  EXPECT_EQ(smoothed.mean(), star);
  for (std::size_t i = 0; i < star.size(); ++i) {
    EXPECT_EQ(smoothed.sigma()[i], std::max(0.5 * before[i], 0.01 * (i % 2 == 0 ? 100.0 : 325.0)));
  }
}

TEST(CrossEntropy, SigmaNeverBelowTheFloor) {
  CrossEntropyAgent ce({}, {{0, 100}, {0, 325}}, 4, 6);
  std::vector<double> x = {0};
  std::mt19937_64 rng(1);
  for (int ep = 0; ep < 200; ++ep) {
    double obj = 0;
    for (int k = 0; k < 4; ++k) {
      auto u = ce.step(x, 0.0);
      obj += std::abs(u[0] - 42.0) + std::abs(u[1] - 10.0);
    }
    ce.episode_finished(obj);
    ce.reset(x, 0.0);
    for (std::size_t i = 0; i < ce.sigma().size(); ++i) {
      ASSERT_GE(ce.sigma()[i], 0.01 * (i % 2 == 0 ? 100.0 : 325.0));
    }
  }
  EXPECT_EQ(ce.generation(), 20u);
  EXPECT_EQ(ce.elite_count(), 2u);
}

TEST(CrossEntropy, PopulationBelowFourIsRejected) {
  CrossEntropyConfig c;
  c.population = 3;
  EXPECT_THROW(CrossEntropyAgent(c, {{0, 1}}, 2, 1), std::invalid_argument);
}

TEST(SyntheticObjective, AnnealingSolvesLowDimensions) {
  for (std::size_t dim : {1u, 2u, 3u, 4u}) {
    EXPECT_GE(synthetic_successes(dim, make_sa), 18) << "dimension " << dim;
  }
}

TEST(SyntheticObjective, CrossEntropySolvesLowDimensions) {
  for (std::size_t dim : {1u, 2u, 3u, 4u}) {
    EXPECT_GE(synthetic_successes(dim, make_ce), 18) << "dimension " << dim;
  }
}

// The 200-episode budget is too small for a 0.1 total error at dimension 10
// (0.01 per coordinate) with these schedules; kept for measurement.
TEST(SyntheticObjective, DISABLED_HighDimensions) {
  for (std::size_t dim : {5u, 10u}) {
    std::cout << "dim " << dim << ": sa " << synthetic_successes(dim, make_sa) << "/20, ce "
              << synthetic_successes(dim, make_ce) << "/20\n";
  }
}

TEST(SyntheticObjective, EpisodeParametersAreAFunctionOfSeedAndObjectives) {
  for (auto make : {+[](std::uint64_t s) -> std::unique_ptr<EpisodeParamOptimizer> {
                      return std::make_unique<AnnealingAgent>(AnnealingConfig{},
                                                              std::vector<InputBound>{{0, 1}}, 4, s);
                    },
                    +[](std::uint64_t s) -> std::unique_ptr<EpisodeParamOptimizer> {
                      return std::make_unique<CrossEntropyAgent>(
                          CrossEntropyConfig{}, std::vector<InputBound>{{0, 1}}, 4, s);
                    }}) {
    auto a = make(3), b = make(3);
    std::vector<double> x = {0};
    for (int ep = 0; ep < 50; ++ep) {
      ASSERT_EQ(a->candidate(), b->candidate()) << "episode " << ep;
      double obj = std::abs(a->candidate()[0] - 0.3) + ep * 0.01;
      for (auto* agent : {a.get(), b.get()}) {
        for (int k = 0; k < 4; ++k) agent->step(x, 0.0);
        agent->episode_finished(obj);
        agent->reset(x, 0.0);
      }
    }
  }
}

TEST(Agents, EveryKindRespectsAdversarialBounds) {
  std::vector<std::vector<InputBound>> boxes = {
      {{-1e6, -1e6 + 1e-9}, {3, 3}},  // degenerate and near-degenerate
      {{-5, 5}, {1e-12, 2e-12}},
      {{0, 1e12}, {-1e12, 0}},
  };
  SurrogateAt probe;
  for (const auto& box : boxes) {
    AgentContext ctx{probe.output_schema(), box, probe.output_ranges(), 5, 40};
    for (const char* kind : {"random", "q", "sa", "ce"}) {
      AgentConfig c;
      c.kind = kind;
      auto agent = make_agent(c, ctx, 17);
      std::mt19937_64 rng(3);
      std::vector<double> x = probe.reset();
      for (int ep = 0; ep < 40; ++ep) {
        for (int k = 0; k < 5; ++k) {
          auto u = agent->step(x, std::uniform_real_distribution<double>(-1, 5)(rng));
          ASSERT_EQ(u.size(), 2u);
          for (std::size_t ch = 0; ch < 2; ++ch) {
            ASSERT_TRUE(box[ch].contains(u[ch])) << kind << " channel " << ch << " " << u[ch];
          }
          x[0] = std::uniform_real_distribution<double>(-50, 250)(rng);
        }
        agent->episode_finished(std::uniform_real_distribution<double>(-3, 3)(rng));
        agent->reset(x, 0.0);
      }
    }
  }
}

TEST(Agents, SnapshotsRoundTripAndResumeIdentically) {
  auto ctx = at_context(6, 30);
  for (const char* kind : {"random", "q", "sa", "ce"}) {
    AgentConfig c;
    c.kind = kind;
    auto a = make_agent(c, ctx, 21);
    SurrogateAt m;
    auto drive = [&](Agent& agent, int episodes, std::vector<std::vector<double>>* out) {
      for (int ep = 0; ep < episodes; ++ep) {
        auto state = m.reset();
        double r = 0.0;
        for (int k = 0; k < 6; ++k) {
          auto u = agent.step(state, r);
          if (out) out->push_back(u);
          state = m.step(u, 1.0);
          r = std::expm1(-(120.0 - state[0]) / 50.0);
        }
        agent.episode_finished(120.0 - state[0]);
        agent.reset(state, r);
      }
    };
    drive(*a, 7, nullptr);
    auto snap = a->save();
    EXPECT_EQ(snap.at("format"), kSnapshotFormat);
    EXPECT_EQ(snap.at("version"), kSnapshotVersion);
    EXPECT_EQ(snap.at("kind"), kind);

    auto b = make_agent(c, ctx, 999);
    b->load(snap);
    EXPECT_EQ(b->save(), snap) << kind;

    std::vector<std::vector<double>> ua, ub;
    drive(*a, 5, &ua);
    drive(*b, 5, &ub);
    EXPECT_EQ(ua, ub) << kind;
  }
}

TEST(Agents, SnapshotsAreCheckedOnLoad) {
  auto ctx = at_context();
  AgentConfig q;
  q.kind = "q";
  AgentConfig sa;
  sa.kind = "sa";
  auto qa = make_agent(q, ctx, 1);
  auto sq = make_agent(sa, ctx, 1);
  EXPECT_THROW(sq->load(qa->save()), std::invalid_argument);
  auto snap = qa->save();
  snap["version"] = kSnapshotVersion + 1;
  EXPECT_THROW(qa->load(snap), std::invalid_argument);
  q.q.default_bins = 4;
  auto smaller = make_agent(q, ctx, 1);
  EXPECT_THROW(smaller->load(qa->save()), std::invalid_argument);
}

TEST(AgentConfig, ParsesAndValidates) {
  auto c = agent_config_from_json(nlohmann::json::parse(R"({
    "kind": "q", "seed": 5, "bins": [{"signal": "v", "lo": 0, "hi": 200, "count": 20}],
    "action_levels": [2, 2], "alpha": 0.25, "epsilon_end": 0.1
  })"));
  EXPECT_EQ(c.kind, "q");
  EXPECT_EQ(c.seed, 5u);
  ASSERT_EQ(c.q.bins.size(), 1u);
  EXPECT_EQ(c.q.bins[0], (ObservationBins{"v", 0, 200, 20}));
  EXPECT_EQ(c.q.action_levels, (std::vector<std::size_t>{2, 2}));
  EXPECT_EQ(c.q.alpha, 0.25);
  EXPECT_EQ(c.q.epsilon_end, 0.1);
  EXPECT_EQ(agent_config_from_json(agent_config_to_json(c)).q.bins, c.q.bins);

  EXPECT_THROW(agent_config_from_json(nlohmann::json::parse(R"({"kind": "dqn"})")),
               std::invalid_argument);
  EXPECT_THROW(agent_config_from_json(nlohmann::json::parse(R"({"kind": "q", "alpah": 1})")),
               std::invalid_argument);
  EXPECT_THROW(agent_config_from_json(nlohmann::json::parse(R"({"kind": "q", "alpha": "x"})")),
               std::invalid_argument);
  EXPECT_THROW(agent_config_from_json(nlohmann::json::parse("[1]")), std::invalid_argument);
  EXPECT_TRUE(is_agent_kind("ce"));
  EXPECT_FALSE(is_agent_kind("a3c"));
}

TEST(AgentConfig, FixedSeedOverridesTheCallerSeed) {
  AgentConfig c;
  c.seed = 4;
  auto ctx = at_context();
  auto a = make_agent(c, ctx, 1), b = make_agent(c, ctx, 2);
  std::vector<double> x(7, 0.0);
  EXPECT_EQ(a->step(x, 0.0), b->step(x, 0.0));
}
