#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <set>
#include <sstream>

#include "generators.hpp"
#include "stlrl/oracle/brute_force.hpp"
#include "stlrl/robustness/evaluator.hpp"
#include "stlrl/robustness/monitor.hpp"
#include "stlrl/stl/parser.hpp"
#include "stlrl/stl/reach.hpp"

using namespace stlrl;

namespace {

SignalSchema v_schema() {
  SignalSchema s;
  s.add("v", SignalKind::Real);
  return s;
}

Trace v_trace(std::initializer_list<double> vs, double dt = 1.0) {
  Trace tr(v_schema());
  double t = 0.0;
  for (double v : vs) {
    tr.push_back(t, std::span<const double>(&v, 1));
    t += dt;
  }
  return tr;
}

Formula v_le(double c) { return Formula::comparison("v", Comparator::LessEqual, c); }

bool has_op(const Formula& f, std::initializer_list<Op> ops) {
  std::vector<Op> seen;
  gen::collect_ops(f, seen);
  for (Op o : seen) {
    for (Op x : ops) {
      if (o == x) return true;
    }
  }
  return false;
}

// Rebuilds f with every `x <= c` / `x < c` constant raised by `delta`.
Formula raise_upper_bounds(const Formula& f, double delta) {
  switch (f.op()) {
    case Op::Constant:
      return f;
    case Op::Atom: {
      const auto* c = std::get_if<Comparison>(&f.atom());
      if (!c || c->comparator == Comparator::Greater || c->comparator == Comparator::GreaterEqual) {
        return f;
      }
      return Formula::comparison(c->variable, c->comparator, c->constant + delta);
    }
    case Op::Not: return Formula::negation(raise_upper_bounds(f.lhs(), delta));
    case Op::And:
      return Formula::conjunction(raise_upper_bounds(f.lhs(), delta),
                                  raise_upper_bounds(f.rhs(), delta));
    case Op::Or:
      return Formula::disjunction(raise_upper_bounds(f.lhs(), delta),
                                  raise_upper_bounds(f.rhs(), delta));
    case Op::Implies:
      return Formula::implication(raise_upper_bounds(f.lhs(), delta),
                                  raise_upper_bounds(f.rhs(), delta));
    case Op::Always: return Formula::always(f.interval(), raise_upper_bounds(f.lhs(), delta));
    case Op::Eventually:
      return Formula::eventually(f.interval(), raise_upper_bounds(f.lhs(), delta));
    case Op::Historically:
      return Formula::historically(f.interval(), raise_upper_bounds(f.lhs(), delta));
    case Op::Once: return Formula::once(f.interval(), raise_upper_bounds(f.lhs(), delta));
    case Op::Until:
      return Formula::until(f.interval(), raise_upper_bounds(f.lhs(), delta),
                            raise_upper_bounds(f.rhs(), delta));
    case Op::Since:
      return Formula::since(f.interval(), raise_upper_bounds(f.lhs(), delta),
                            raise_upper_bounds(f.rhs(), delta));
    case Op::Next: return Formula::next(raise_upper_bounds(f.lhs(), delta));
    case Op::Prev: return Formula::prev(raise_upper_bounds(f.lhs(), delta));
  }
  return f;
}

}  // namespace

TEST(EvalRob, AtomsAreSignedDistances) {
  auto tr = v_trace({3});
  EXPECT_TRUE(eval_bool(v_le(5), tr, 0));
  EXPECT_EQ(eval_rob(v_le(5), tr, 0), 2.0);
  EXPECT_EQ(eval_rob(Formula::negation(v_le(5)), tr, 0), -2.0);
  EXPECT_EQ(eval_rob(Formula::comparison("v", Comparator::GreaterEqual, 5), tr, 0), -2.0);
  EXPECT_EQ(eval_rob(Formula::comparison("v", Comparator::Less, 3), tr, 0), 0.0);
  EXPECT_FALSE(eval_bool(Formula::comparison("v", Comparator::Less, 3), tr, 0));
  EXPECT_TRUE(eval_bool(Formula::comparison("v", Comparator::LessEqual, 3), tr, 0));
}

TEST(EvalRob, AlwaysOverWindow) {
  auto tr = v_trace({3, 7, 4});
  auto f = Formula::always(Interval::make(0, 2), v_le(5));
  EXPECT_EQ(eval_rob(f, tr, 0), -2.0);
  EXPECT_FALSE(eval_bool(f, tr, 0));
}

TEST(EvalRob, BooleanPropositionsUseKappa) {
  SignalSchema s;
  s.add("p", SignalKind::Bool);
  Trace tr(s);
  for (double b : {1.0, 1.0, 1.0}) tr.push_back(tr.size(), std::span<const double>(&b, 1));
  auto p = Formula::proposition("p");
  EXPECT_TRUE(eval_bool(Formula::always(Interval::make(0, 2), p), tr, 0));
  EXPECT_EQ(eval_rob(p, tr, 0), 1.0);
  RobustnessOptions kappa{2.5};
  EXPECT_EQ(eval_rob(Formula::negation(p), tr, 0, kappa), -2.5);
}

TEST(EvalRob, EmptySetConventions) {
  auto tr = v_trace({3, 7, 4});
  // Nothing lies 5..6 s back from the start: min over nothing, max over nothing.
  EXPECT_EQ(eval_rob(Formula::historically(Interval::make(5, 6), v_le(0)), tr, 2), kInfinity);
  EXPECT_EQ(eval_rob(Formula::once(Interval::make(5, 6), v_le(0)), tr, 2), -kInfinity);
  EXPECT_EQ(eval_rob(Formula::prev(v_le(5)), tr, 0), -kInfinity);
  EXPECT_EQ(eval_rob(Formula::prev(v_le(5)), tr, 1), 2.0);
  EXPECT_EQ(eval_rob(Formula::next(v_le(5)), tr, 0), -2.0);
}

TEST(EvalRob, InsufficientTraceIsReported) {
  auto tr = v_trace({3, 7, 4});
  EXPECT_THROW(eval_rob(Formula::always(Interval::make(0, 3), v_le(5)), tr, 0), InsufficientTrace);
  EXPECT_THROW(eval_rob(Formula::next(v_le(5)), tr, 2), InsufficientTrace);
  EXPECT_THROW(eval_rob(v_le(5), tr, 3), std::out_of_range);
  auto series = robustness_series(Formula::eventually(Interval::make(0, 1), v_le(5)), tr);
  ASSERT_EQ(series.size(), 3u);
  EXPECT_EQ(series[0], 2.0);
  EXPECT_EQ(series[1], 1.0);
  EXPECT_FALSE(series[2].has_value());
}

TEST(EvalBool, UntilMatchesTruthTableOnAllValuations) {
  SignalSchema s;
  s.add("p", SignalKind::Bool);
  s.add("q", SignalKind::Bool);
  auto f = Formula::until(Interval::make(0, 2), Formula::proposition("p"),
                          Formula::proposition("q"));
  for (int bits = 0; bits < 64; ++bits) {
    bool p[3], q[3];
    Trace tr(s);
    for (int k = 0; k < 3; ++k) {
      p[k] = (bits >> (2 * k)) & 1;
      q[k] = (bits >> (2 * k + 1)) & 1;
      double row[2] = {p[k] ? 1.0 : 0.0, q[k] ? 1.0 : 0.0};
      tr.push_back(k, row);
    }
    // q at some k in 0..2 with p strictly before k.
    bool expected = q[0] || (p[0] && q[1]) || (p[0] && p[1] && q[2]);
    EXPECT_EQ(eval_bool(f, tr, 0), expected) << "valuation " << bits;
    EXPECT_EQ(eval_rob(f, tr, 0) > 0, expected) << "valuation " << bits;
  }
}

TEST(EvalRob, MatchesBruteForceOracle) {
  std::mt19937_64 rng(11);
  std::set<Op> covered;
  for (int i = 0; i < 1000; ++i) {
    gen::FormulaShape shape;
    shape.bounded = i % 4 != 0;
    auto f = gen::random_formula(rng, shape);
    std::vector<Op> ops;
    gen::collect_ops(f, ops);
    covered.insert(ops.begin(), ops.end());
    auto tr = gen::random_trace(rng, 1 + rng() % 20);
    auto series = robustness_series(f, tr);
    for (std::size_t n = 0; n < tr.size(); ++n) {
      auto expected = oracle::robustness(f, tr, n);
      ASSERT_EQ(series[n], expected) << to_string(f) << " at " << n;
    }
  }
  EXPECT_EQ(covered.size(), 14u);
}

TEST(EvalRob, SignSoundnessAndNegationDuality) {
  std::mt19937_64 rng(12);
  for (int i = 0; i < 1000; ++i) {
    auto f = gen::random_formula(rng, {});
    auto tr = gen::random_trace(rng, 1 + rng() % 20);
    auto rho = robustness_series(f, tr);
    auto sat = satisfaction_series(f, tr);
    auto neg = robustness_series(Formula::negation(f), tr);
    for (std::size_t n = 0; n < tr.size(); ++n) {
      ASSERT_EQ(rho[n].has_value(), sat[n].has_value());
      if (!rho[n]) continue;
      if (*rho[n] > 0) EXPECT_TRUE(*sat[n]) << to_string(f) << " at " << n;
      if (*rho[n] < 0) EXPECT_FALSE(*sat[n]) << to_string(f) << " at " << n;
      EXPECT_EQ(*neg[n], -*rho[n]);
      EXPECT_EQ(oracle::satisfied(f, tr, n), sat[n]) << to_string(f) << " at " << n;
    }
  }
}

TEST(EvalRob, RaisingUpperBoundsNeverLowersRobustness) {
  std::mt19937_64 rng(13);
  int checked = 0;
  for (int i = 0; i < 2000 && checked < 500; ++i) {
    auto f = gen::random_formula(rng, {});
    if (has_op(f, {Op::Not, Op::Implies})) continue;
    auto g = raise_upper_bounds(f, 1.0);
    auto tr = gen::random_trace(rng, 1 + rng() % 20);
    auto a = robustness_series(f, tr);
    auto b = robustness_series(g, tr);
    for (std::size_t n = 0; n < tr.size(); ++n) {
      if (a[n]) EXPECT_GE(*b[n], *a[n]) << to_string(f) << " at " << n;
    }
    ++checked;
  }
  EXPECT_EQ(checked, 500);
}

TEST(GlobalMin, Examples) {
  auto tr = v_trace({3, 7, 4});
  auto m = global_min_rob(v_le(5), tr);
  EXPECT_EQ(m.value, -2.0);
  EXPECT_EQ(m.index, 1u);

  auto flat = v_trace({1, 1, 1});
  auto c = global_min_rob(v_le(5), flat);
  EXPECT_EQ(c.value, 4.0);
  EXPECT_EQ(c.index, 0u);

  // Nothing evaluable: +inf and no index.
  auto none = global_min_rob(Formula::next(Formula::next(v_le(5))), v_trace({1, 2}));
  EXPECT_EQ(none.value, kInfinity);
  EXPECT_FALSE(none.index.has_value());
}

TEST(Monitor, FirstPushAndHistoricallyWindow) {
  auto schema = v_schema();
  Monitor first(v_le(5), schema);
  double v = 3;
  EXPECT_EQ(first.push(0, std::span<const double>(&v, 1)), 2.0);

  std::mt19937_64 rng(21);
  auto f = Formula::historically(Interval::make(0, 3), v_le(5));
  Monitor m(f, schema);
  Trace full(schema);
  std::uniform_real_distribution<double> val(0, 10);
  for (int i = 0; i < 20; ++i) {
    double x = val(rng);
    full.push_back(0.5 * i, std::span<const double>(&x, 1));
    EXPECT_EQ(m.push(0.5 * i, std::span<const double>(&x, 1)), eval_rob(f, full, full.size() - 1));
  }
  EXPECT_LT(m.retained(), 20u);
}

TEST(Monitor, RejectsNonIncreasingTimesAndFutureFormulas) {
  Monitor m(v_le(5), v_schema());
  double v = 1;
  m.push(1.0, std::span<const double>(&v, 1));
  EXPECT_THROW(m.push(1.0, std::span<const double>(&v, 1)), std::invalid_argument);
  EXPECT_THROW(Monitor(Formula::eventually(Interval::make(0, 1), v_le(5)), v_schema()),
               std::invalid_argument);
}

TEST(Monitor, MatchesOfflineOnEveryPrefixAndEvictionIsInvisible) {
  std::mt19937_64 rng(22);
  gen::FormulaShape past_only;
  past_only.future = false;
  for (int i = 0; i < 300; ++i) {
    auto f = gen::random_formula(rng, past_only);
    auto tr = gen::random_trace(rng, 100);
    Monitor evicting(f, tr.schema());
    Monitor keeping(f, tr.schema(), {}, false);
    auto offline = robustness_series(f, tr);
    for (std::size_t n = 0; n < tr.size(); ++n) {
      double a = evicting.push(tr.time(n), tr.state(n));
      double b = keeping.push(tr.time(n), tr.state(n));
      ASSERT_EQ(a, b) << to_string(f) << " at " << n;
      ASSERT_EQ(a, *offline[n]) << to_string(f) << " at " << n;
    }
  }
}

TEST(Monitor, RewrittenPropertiesMatchOfflineOnPrefixes) {
  std::mt19937_64 rng(23);
  int checked = 0;
  for (int i = 0; i < 400; ++i) {
    auto f = gen::random_formula(rng, {});
    if (!past_reach(f).finite()) continue;
    auto g = to_past_dependent(LifeLongProperty(f), 0.5).body();
    if (!is_past_dependent(g)) continue;  // X in the body keeps a symbolic step
    auto tr = gen::random_trace(rng, 20, 0.5);
    Monitor m(g, tr.schema());
    double low = kInfinity;
    for (std::size_t n = 0; n < tr.size(); ++n) {
      double rho = m.push(tr.time(n), tr.state(n));
      EXPECT_EQ(rho, eval_rob(g, tr.slice(0, n + 1), n)) << to_string(g) << " at " << n;
      low = std::min(low, rho);
    }
    EXPECT_EQ(global_min_rob(g, tr).value, low);
    ++checked;
  }
  EXPECT_GT(checked, 200);
}

TEST(Rewrite, VerdictsAgreeAtShiftedInteriorIndices) {
  std::mt19937_64 rng(31);
  const double dt = 0.5;
  int checked = 0;
  for (int i = 0; checked < 200; ++i) {
    auto f = gen::random_formula(rng, {});
    if (!past_reach(f).finite()) continue;
    const double h = future_reach(f).resolve(dt);
    auto g = to_past_dependent(LifeLongProperty(f), dt).body();
    const auto shift = static_cast<std::size_t>(std::llround(h / dt));
    const std::size_t length = std::max<std::size_t>(3 * shift, 12);
    auto tr = gen::random_trace(rng, length, dt);
    auto a = satisfaction_series(f, tr);
    auto b = satisfaction_series(g, tr);
    for (std::size_t n = 0; n + shift < tr.size(); ++n) {
      if (!a[n] || !b[n + shift]) continue;
      ASSERT_EQ(*a[n], *b[n + shift]) << to_string(f) << " at " << n;
    }
    ++checked;
  }
}

TEST(TraceCsv, RoundTripIsBitExact) {
  std::mt19937_64 rng(41);
  auto tr = gen::random_trace(rng, 30);
  Trace noisy(tr.schema());
  std::uniform_real_distribution<double> u(-1, 1);
  for (std::size_t i = 0; i < tr.size(); ++i) {
    double row[3] = {tr.value(i, 0) + u(rng) / 3, tr.value(i, 1) * 1e-7, tr.value(i, 2)};
    noisy.push_back(tr.time(i) + 0.1, row);
  }
  std::stringstream ss;
  write_trace_csv(ss, noisy);
  EXPECT_EQ(read_trace_csv(ss, noisy.schema()), noisy);
}

TEST(TraceCsv, ColumnsMatchedByNameAndValidated) {
  std::stringstream ss("time,extra,y,x,p\n0,9,1,2,1\n0.5,9,3,4,0\n");
  auto tr = read_trace_csv(ss, gen::corpus_schema());
  ASSERT_EQ(tr.size(), 2u);
  EXPECT_EQ(tr.value(1, 0), 4.0);
  EXPECT_EQ(tr.value(1, 1), 3.0);
  std::stringstream missing("time,x,p\n0,1,1\n");
  EXPECT_THROW(read_trace_csv(missing, gen::corpus_schema()), std::runtime_error);
  std::stringstream backwards("time,x,y,p\n1,0,0,0\n0,0,0,0\n");
  EXPECT_THROW(read_trace_csv(backwards, gen::corpus_schema()), std::exception);
}

TEST(TraceCsv, RobustnessDump) {
  std::stringstream ss;
  std::vector<double> t = {0, 0.5}, rho = {1.5, -kInfinity};
  write_robustness_csv(ss, t, rho);
  EXPECT_EQ(ss.str(), "time,rho\n0,1.5\n0.5,-inf\n");
}
