#include "stlrl/robustness/evaluator.hpp"

#include <algorithm>
#include <string>

namespace stlrl {

InsufficientTrace::InsufficientTrace(std::size_t index, const std::string& what)
    : std::runtime_error(what), index_(index) {}

namespace {

template <class V>
using Series = std::vector<std::optional<V>>;

struct RobustnessDomain {
  using Value = double;
  double bool_magnitude = 1.0;

  static Value top() { return kInfinity; }
  static Value bottom() { return -kInfinity; }
  static Value constant(bool b) { return b ? top() : bottom(); }
  // Signed distance to the violating half-line; `>` and `>=` are the
  // negations of `<=` and `<`.
  static Value comparison(const Comparison& c, double v) {
    switch (c.comparator) {
      case Comparator::Less:
      case Comparator::LessEqual:
        return c.constant - v;
      case Comparator::Greater:
      case Comparator::GreaterEqual:
        return v - c.constant;
    }
    return 0.0;
  }
  Value proposition(double v) const { return v != 0.0 ? bool_magnitude : -bool_magnitude; }
  static Value negate(Value a) { return -a; }
  static Value conj(Value a, Value b) { return std::min(a, b); }
  static Value disj(Value a, Value b) { return std::max(a, b); }
};

struct BooleanDomain {
  using Value = bool;

  static Value top() { return true; }
  static Value bottom() { return false; }
  static Value constant(bool b) { return b; }
  static Value comparison(const Comparison& c, double v) {
    switch (c.comparator) {
      case Comparator::Less: return v < c.constant;
      case Comparator::LessEqual: return v <= c.constant;
      case Comparator::Greater: return v > c.constant;
      case Comparator::GreaterEqual: return v >= c.constant;
    }
    return false;
  }
  static Value proposition(double v) { return v != 0.0; }
  static Value negate(Value a) { return !a; }
  static Value conj(Value a, Value b) { return a && b; }
  static Value disj(Value a, Value b) { return a || b; }
};

/// Index range [first, last] of a sampling window; empty when first > last.
struct Window {
  std::size_t first = 1;
  std::size_t last = 0;
  bool empty() const { return first > last; }
};

/// Bottom-up evaluation: each subformula is evaluated once at every index.
template <class Domain>
class Engine {
 public:
  using Value = typename Domain::Value;

  Engine(const Trace& trace, Domain domain)
      : trace_(trace), t_(trace.times()), n_(trace.size()), domain_(std::move(domain)) {}

  Series<Value> eval(const Formula& f) {
    switch (f.op()) {
      case Op::Constant:
        return Series<Value>(n_, Domain::constant(f.value()));
      case Op::Atom:
        return atom(f.atom());
      case Op::Not: {
        auto s = eval(f.lhs());
        for (auto& v : s) {
          if (v) v = Domain::negate(*v);
        }
        return s;
      }
      case Op::And:
      case Op::Or:
      case Op::Implies:
        return boolean(f);
      case Op::Always:
      case Op::Eventually:
        return future_window(f);
      case Op::Historically:
      case Op::Once:
        return past_window(f);
      case Op::Until:
        return until(f);
      case Op::Since:
        return since(f);
      case Op::Next: {
        auto s = eval(f.lhs());
        Series<Value> out(n_);
        for (std::size_t m = 0; m + 1 < n_; ++m) out[m] = s[m + 1];
        return out;
      }
      case Op::Prev: {
        auto s = eval(f.lhs());
        Series<Value> out(n_);
        if (n_ > 0) out[0] = Domain::bottom();
        for (std::size_t m = 1; m < n_; ++m) out[m] = s[m - 1];
        return out;
      }
    }
    return Series<Value>(n_);
  }

 private:
  Series<Value> atom(const Atom& a) {
    Series<Value> out(n_);
    if (const auto* c = std::get_if<Comparison>(&a)) {
      std::size_t col = column(c->variable);
      for (std::size_t m = 0; m < n_; ++m) out[m] = Domain::comparison(*c, trace_.value(m, col));
    } else {
      std::size_t col = column(std::get<Proposition>(a).name);
      for (std::size_t m = 0; m < n_; ++m) out[m] = domain_.proposition(trace_.value(m, col));
    }
    return out;
  }

  std::size_t column(const std::string& name) const {
    auto col = trace_.schema().find(name);
    if (!col) throw std::invalid_argument("formula refers to unknown signal '" + name + "'");
    return *col;
  }

  Series<Value> boolean(const Formula& f) {
    auto a = eval(f.lhs());
    auto b = eval(f.rhs());
    Series<Value> out(n_);
    for (std::size_t m = 0; m < n_; ++m) {
      if (!a[m] || !b[m]) continue;
      switch (f.op()) {
        case Op::And: out[m] = Domain::conj(*a[m], *b[m]); break;
        case Op::Or: out[m] = Domain::disj(*a[m], *b[m]); break;
        default: out[m] = Domain::disj(Domain::negate(*a[m]), *b[m]); break;
      }
    }
    return out;
  }

  // The trace extends at least `hi` past sample m.
  bool covered(std::size_t m, double hi) const {
    return t_[n_ - 1] - t_[m] >= hi - kTimeTolerance;
  }

  Window ahead(std::size_t m, const Interval& i) const {
    auto begin = t_.begin() + static_cast<std::ptrdiff_t>(m);
    double tm = t_[m];
    auto lo = std::partition_point(begin, t_.end(),
                                   [&](double tj) { return tj - tm < i.lo - kTimeTolerance; });
    auto hi = std::partition_point(begin, t_.end(),
                                   [&](double tj) { return tj - tm <= i.hi + kTimeTolerance; });
    if (hi == begin) return {};
    Window w;
    w.first = static_cast<std::size_t>(lo - t_.begin());
    w.last = static_cast<std::size_t>(hi - t_.begin()) - 1;
    return w;
  }

  Window behind(std::size_t m, const Interval& i) const {
    auto end = t_.begin() + static_cast<std::ptrdiff_t>(m) + 1;
    double tm = t_[m];
    // tm - tj decreases with j.
    auto first = std::partition_point(t_.begin(), end,
                                      [&](double tj) { return tm - tj > i.hi + kTimeTolerance; });
    auto past_last = std::partition_point(
        t_.begin(), end, [&](double tj) { return tm - tj >= i.lo - kTimeTolerance; });
    if (past_last == t_.begin()) return {};
    Window w;
    w.first = static_cast<std::size_t>(first - t_.begin());
    w.last = static_cast<std::size_t>(past_last - t_.begin()) - 1;
    return w;
  }

  std::optional<Value> fold(const Series<Value>& s, Window w, bool conj) const {
    Value acc = conj ? Domain::top() : Domain::bottom();
    for (std::size_t j = w.first; j <= w.last && !w.empty(); ++j) {
      if (!s[j]) return std::nullopt;
      acc = conj ? Domain::conj(acc, *s[j]) : Domain::disj(acc, *s[j]);
    }
    return acc;
  }

  Series<Value> future_window(const Formula& f) {
    auto s = eval(f.lhs());
    const bool conj = f.op() == Op::Always;
    Series<Value> out(n_);
    for (std::size_t m = 0; m < n_; ++m) {
      if (!covered(m, f.interval().hi)) continue;
      out[m] = fold(s, ahead(m, f.interval()), conj);
    }
    return out;
  }

  Series<Value> past_window(const Formula& f) {
    auto s = eval(f.lhs());
    const bool conj = f.op() == Op::Historically;
    Series<Value> out(n_);
    for (std::size_t m = 0; m < n_; ++m) out[m] = fold(s, behind(m, f.interval()), conj);
    return out;
  }

  // max over goal instants g in the window of min(goal(g), hold on [m, g)).
  Series<Value> until(const Formula& f) {
    auto hold = eval(f.lhs());
    auto goal = eval(f.rhs());
    Series<Value> out(n_);
    for (std::size_t m = 0; m < n_; ++m) {
      if (!covered(m, f.interval().hi)) continue;
      Window w = ahead(m, f.interval());
      Value acc = Domain::bottom();
      bool ok = true;
      if (!w.empty()) {
        Value running = Domain::top();
        for (std::size_t j = m; j <= w.last && ok; ++j) {
          if (j >= w.first) {
            if (!goal[j]) {
              ok = false;
              break;
            }
            acc = Domain::disj(acc, Domain::conj(*goal[j], running));
          }
          if (j < w.last) {
            if (!hold[j]) {
              ok = false;
              break;
            }
            running = Domain::conj(running, *hold[j]);
          }
        }
      }
      if (ok) out[m] = acc;
    }
    return out;
  }

  // max over goal instants g in the window of min(goal(g), hold on (g, m]).
  Series<Value> since(const Formula& f) {
    auto hold = eval(f.lhs());
    auto goal = eval(f.rhs());
    Series<Value> out(n_);
    for (std::size_t m = 0; m < n_; ++m) {
      Window w = behind(m, f.interval());
      Value acc = Domain::bottom();
      bool ok = true;
      if (!w.empty()) {
        Value running = Domain::top();
        for (std::size_t j = m + 1; j-- > w.first;) {
          if (j <= w.last) {
            if (!goal[j]) {
              ok = false;
              break;
            }
            acc = Domain::disj(acc, Domain::conj(*goal[j], running));
          }
          if (j > w.first) {
            if (!hold[j]) {
              ok = false;
              break;
            }
            running = Domain::conj(running, *hold[j]);
          }
        }
      }
      if (ok) out[m] = acc;
    }
    return out;
  }

  const Trace& trace_;
  const std::vector<double>& t_;
  std::size_t n_;
  Domain domain_;
};

void check_index(const Trace& trace, std::size_t n) {
  if (n >= trace.size()) {
    throw std::out_of_range("sample index " + std::to_string(n) + " outside trace of length " +
                            std::to_string(trace.size()));
  }
}

[[noreturn]] void insufficient(const Formula& f, const Trace& trace, std::size_t n) {
  throw InsufficientTrace(n, "formula " + to_string(f) + " needs samples beyond t=" +
                                 format_number(trace.time(trace.size() - 1)) + " at index " +
                                 std::to_string(n));
}

}  // namespace

std::vector<std::optional<Robustness>> robustness_series(const Formula& f, const Trace& trace,
                                                         const RobustnessOptions& options) {
  return Engine<RobustnessDomain>(trace, RobustnessDomain{options.bool_magnitude}).eval(f);
}

std::vector<std::optional<bool>> satisfaction_series(const Formula& f, const Trace& trace) {
  return Engine<BooleanDomain>(trace, BooleanDomain{}).eval(f);
}

bool eval_bool(const Formula& f, const Trace& trace, std::size_t n) {
  check_index(trace, n);
  auto s = satisfaction_series(f, trace);
  if (!s[n]) insufficient(f, trace, n);
  return *s[n];
}

Robustness eval_rob(const Formula& f, const Trace& trace, std::size_t n,
                    const RobustnessOptions& options) {
  check_index(trace, n);
  auto s = robustness_series(f, trace, options);
  if (!s[n]) insufficient(f, trace, n);
  return *s[n];
}

GlobalMinimum global_min_rob(const Formula& f, const Trace& trace,
                             const RobustnessOptions& options) {
  GlobalMinimum best;
  auto s = robustness_series(f, trace, options);
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (!s[i]) continue;
    if (!best.index || *s[i] < best.value) {
      best.value = *s[i];
      best.index = i;
    }
  }
  return best;
}

}  // namespace stlrl
