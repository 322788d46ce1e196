#include <gtest/gtest.h>

#include <chrono>
#include <cmath>
#include <random>
#include <sstream>

#include "stlrl/system/external_model.hpp"
#include "stlrl/system/surrogate_at.hpp"

using namespace stlrl;

namespace {

InputSignal random_signal(std::mt19937_64& rng, const std::vector<InputBound>& bounds, double dt,
                          std::size_t steps) {
  InputSignal u(dt, bounds.size());
  std::vector<double> row(bounds.size());
  for (std::size_t k = 0; k < steps; ++k) {
    for (std::size_t c = 0; c < bounds.size(); ++c) {
      row[c] = std::uniform_real_distribution<double>(bounds[c].lo, bounds[c].hi)(rng);
    }
    u.push_back(row);
  }
  return u;
}

InputSignal constant_signal(double throttle, double brake, double dt, std::size_t steps) {
  InputSignal u(dt, 2);
  for (std::size_t k = 0; k < steps; ++k) u.push_back(std::vector<double>{throttle, brake});
  return u;
}

double relative(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-12); }

std::string echo_command(const std::string& flags = "") {
  return std::string("'") + STLRL_ECHO_SIM_PATH + "' " + flags;
}

SignalSchema echo_schema() {
  SignalSchema s;
  s.add("a", SignalKind::Real);
  s.add("b", SignalKind::Real);
  return s;
}

std::unique_ptr<SystemModel> connect_echo(const std::string& flags = "",
                                          std::chrono::milliseconds timeout =
                                              std::chrono::milliseconds{5000}) {
  SignalSchema in;
  in.add("a", SignalKind::Real);
  in.add("b", SignalKind::Real);
  return external_model_connect(echo_command(flags), in, {{0, 1}, {0, 1}}, echo_schema(), 0.5,
                                timeout);
}

}  // namespace

TEST(SurrogateAt, ResetAndIdleEquilibrium) {
  SurrogateAt m;
  auto x = m.reset();
  EXPECT_EQ(x[SurrogateAt::kSpeed], 0.0);
  EXPECT_EQ(x[SurrogateAt::kRpm], 800.0);
  EXPECT_EQ(x[SurrogateAt::kGear], 1.0);
  EXPECT_EQ(x[SurrogateAt::kGear1], 1.0);
  for (double dt : {0.1, 1.0, 7.5}) {
    auto y = m.step(0.0, 0.0, dt);
    EXPECT_EQ(y[SurrogateAt::kSpeed], 0.0);
    EXPECT_EQ(y[SurrogateAt::kRpm], 800.0);
    EXPECT_EQ(y[SurrogateAt::kGear], 1.0);
  }
  EXPECT_THROW(m.step(0.0, 0.0, 0.0), std::invalid_argument);
  EXPECT_THROW(m.step(0.0, 0.0, -1.0), std::invalid_argument);
}

TEST(SurrogateAt, FullThrottleSecondMatchesFineReference) {
  SurrogateAt m;
  m.reset();
  double v = m.step(100.0, 0.0, 1.0)[SurrogateAt::kSpeed];

  // Independent fine-step integration of dv/dt = 0.04*100*4 - 0.02 v in first gear.
  double ref = 0.0;
  const double h = 1e-4;
  for (int i = 0; i < 10000; ++i) ref += h * (0.04 * 100 * 4.0 - 0.02 * ref);
  EXPECT_LT(relative(v, ref), 0.005);
  EXPECT_EQ(m.gear(), 1);  // 40*4*v + 800 stays below 3500 during the first second
}

TEST(SurrogateAt, FullThrottleShiftsUpThroughEveryGear) {
  SurrogateAt m;
  auto trace = run_signal(m, constant_signal(100.0, 0.0, 0.1, 1200));
  std::vector<int> gears = {1};
  for (std::size_t i = 1; i < trace.size(); ++i) {
    int g = static_cast<int>(trace.value(i, SurrogateAt::kGear));
    if (g != gears.back()) {
      gears.push_back(g);
      EXPECT_LT(trace.value(i, SurrogateAt::kRpm), 3500.0) << "after shift to " << g;
    }
  }
  EXPECT_EQ(gears, (std::vector<int>{1, 2, 3, 4}));
}

TEST(SurrogateAt, StateStaysInBoundsUnderArbitraryInputs) {
  std::mt19937_64 rng(5);
  // Deliberately outside the declared boxes: the plant clamps.
  std::vector<InputBound> wild = {{-50, 150}, {-100, 400}};
  for (int run = 0; run < 20; ++run) {
    SurrogateAt m;
    auto trace = run_signal(m, random_signal(rng, wild, 0.25, 200));
    int last_gear = 1;
    for (std::size_t i = 0; i < trace.size(); ++i) {
      double v = trace.value(i, SurrogateAt::kSpeed);
      double w = trace.value(i, SurrogateAt::kRpm);
      int g = static_cast<int>(trace.value(i, SurrogateAt::kGear));
      ASSERT_GE(v, 0.0);
      ASSERT_GE(w, 800.0);
      ASSERT_GE(g, 1);
      ASSERT_LE(g, 4);
      ASSERT_LE(std::abs(g - last_gear), 1);
      double ones = 0;
      for (std::size_t k = 0; k < 4; ++k) ones += trace.value(i, SurrogateAt::kGear1 + k);
      ASSERT_EQ(ones, 1.0);
      ASSERT_EQ(trace.value(i, SurrogateAt::kGear1 + static_cast<std::size_t>(g - 1)), 1.0);
      last_gear = g;
    }
    EXPECT_GT(m.clamped_inputs(), 0u);
  }
}

TEST(SurrogateAt, DeterministicAndPrefixClosed) {
  std::mt19937_64 rng(6);
  SurrogateAt probe;
  for (int run = 0; run < 20; ++run) {
    auto u = random_signal(rng, probe.input_bounds(), 1.0, 40);
    SurrogateAt a, b;
    auto ta = run_signal(a, u);
    auto tb = run_signal(b, u);
    EXPECT_EQ(ta, tb);
    for (std::size_t k : {0u, 1u, 17u, 39u}) {
      auto prefix = run_signal(a, u.prefix(k));
      ASSERT_EQ(prefix.size(), k + 1);
      EXPECT_EQ(prefix, ta.slice(0, k + 1));
    }
  }
}

TEST(SurrogateAt, HalvingTheIntegratorStepBarelyMoves) {
  SurrogateAtParams fine;
  fine.integrator_step = 0.005;
  SurrogateAt coarse_model, fine_model(fine);
  auto u = constant_signal(100.0, 0.0, 1.0, 100);
  auto a = run_signal(coarse_model, u);
  auto b = run_signal(fine_model, u);
  for (std::size_t i = 1; i < a.size(); ++i) {
    EXPECT_LT(relative(a.value(i, SurrogateAt::kSpeed), b.value(i, SurrogateAt::kSpeed)), 0.005)
        << "t=" << a.time(i);
    EXPECT_LT(relative(a.value(i, SurrogateAt::kRpm), b.value(i, SurrogateAt::kRpm)), 0.005)
        << "t=" << a.time(i);
  }
}

TEST(RunSignal, EmptySignalGivesTheResetState) {
  SurrogateAt m;
  auto tr = run_signal(m, InputSignal(1.0, 2));
  ASSERT_EQ(tr.size(), 1u);
  EXPECT_EQ(tr.time(0), 0.0);
  EXPECT_EQ(tr.value(0, SurrogateAt::kRpm), 800.0);
}

TEST(RunSignal, ReplayThroughCsvReproducesTheTrace) {
  std::mt19937_64 rng(7);
  SurrogateAt m;
  auto u = random_signal(rng, m.input_bounds(), 5.0, 20);
  auto tr = run_signal(m, u);
  std::stringstream ss;
  write_trace_csv(ss, tr);
  auto recorded = read_trace_csv(ss, m.output_schema());
  EXPECT_EQ(run_signal(m, u), recorded);
}

TEST(InputSignal, PiecewiseConstantLookup) {
  InputSignal u(0.5, 1);
  for (double x : {1.0, 2.0, 3.0}) u.push_back(std::span<const double>(&x, 1));
  EXPECT_EQ(u.value_at(0.0)[0], 1.0);
  EXPECT_EQ(u.value_at(0.49)[0], 1.0);
  EXPECT_EQ(u.value_at(0.5)[0], 2.0);
  EXPECT_EQ(u.value_at(1.0)[0], 3.0);
  EXPECT_EQ(u.value_at(99.0)[0], 3.0);
  EXPECT_EQ(u.time(2), 1.0);
  EXPECT_THROW(u.push_back(std::vector<double>{1, 2}), std::invalid_argument);
  EXPECT_THROW(InputSignal(0.0, 1), std::invalid_argument);
}

TEST(ExternalModel, EchoBridgeMatchesInProcessEcho) {
  std::mt19937_64 rng(8);
  auto bridge = connect_echo();
  EchoModel local(echo_schema(), {{0, 1}, {0, 1}});
  for (int run = 0; run < 5; ++run) {
    auto u = random_signal(rng, local.input_bounds(), 0.5, 30);
    EXPECT_EQ(run_signal(*bridge, u), run_signal(local, u));
  }
}

TEST(ExternalModel, MalformedReplyNamesTheLine) {
  auto m = connect_echo("--malformed-after 2");
  m->reset();  // reply 2 is the first bad one (init was reply 1)
  try {
    m->step(std::vector<double>{0.5, 0.5}, 0.5);
    FAIL() << "expected a protocol error";
  } catch (const ProtocolError& e) {
    EXPECT_EQ(e.offending_line(), "this is not json");
    EXPECT_NE(std::string(e.what()).find("this is not json"), std::string::npos);
  }
  EXPECT_THROW(m->reset(), ModelError);
}

TEST(ExternalModel, ChildExitIsAnError) {
  auto m = connect_echo("--exit-after 3");
  m->reset();
  m->step(std::vector<double>{0.1, 0.2}, 0.5);
  EXPECT_THROW(m->step(std::vector<double>{0.1, 0.2}, 0.5), ModelError);
}

TEST(ExternalModel, HangingChildTimesOut) {
  auto m = connect_echo("--hang-after 1", std::chrono::milliseconds{200});
  auto start = std::chrono::steady_clock::now();
  EXPECT_THROW(m->reset(), ModelError);
  EXPECT_LT(std::chrono::steady_clock::now() - start, std::chrono::seconds(5));
}

TEST(ExternalModel, ErrorReplyIsSurfaced) {
  auto m = connect_echo("--error-after 1");
  try {
    m->reset();
    FAIL() << "expected a model error";
  } catch (const ModelError& e) {
    EXPECT_NE(std::string(e.what()).find("injected failure"), std::string::npos);
  }
}

TEST(ExternalModel, MissingCommandFailsAtConnect) {
  SignalSchema in;
  in.add("a", SignalKind::Real);
  SignalSchema out;
  out.add("a", SignalKind::Real);
  EXPECT_THROW(external_model_connect("/nonexistent/simulator", in, {{0, 1}}, out, 1.0,
                                      std::chrono::milliseconds{2000}),
               ModelError);
}

TEST(ExternalModel, RejectsADifferentStepSize) {
  auto m = connect_echo();
  m->reset();
  EXPECT_THROW(m->step(std::vector<double>{0.1, 0.2}, 1.0), ModelError);
}
