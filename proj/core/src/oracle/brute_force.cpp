#include "stlrl/oracle/brute_force.hpp"

#include <algorithm>
#include <stdexcept>
#include <vector>

namespace stlrl::oracle {

Formula normalize(const Formula& f) {
  const Formula top = Formula::constant(true);
  switch (f.op()) {
    case Op::Constant:
      return f;
    case Op::Atom:
      if (const auto* c = std::get_if<Comparison>(&f.atom())) {
        if (c->comparator == Comparator::Greater) {
          return Formula::negation(
              Formula::comparison(c->variable, Comparator::LessEqual, c->constant));
        }
        if (c->comparator == Comparator::GreaterEqual) {
          return Formula::negation(Formula::comparison(c->variable, Comparator::Less, c->constant));
        }
      }
      return f;
    case Op::Not:
      return Formula::negation(normalize(f.lhs()));
    case Op::And:
      return Formula::conjunction(normalize(f.lhs()), normalize(f.rhs()));
    case Op::Or:
      return Formula::disjunction(normalize(f.lhs()), normalize(f.rhs()));
    case Op::Implies:
      return Formula::disjunction(Formula::negation(normalize(f.lhs())), normalize(f.rhs()));
    case Op::Always:
      return Formula::negation(
          Formula::until(f.interval(), top, Formula::negation(normalize(f.lhs()))));
    case Op::Eventually:
      return Formula::until(f.interval(), top, normalize(f.lhs()));
    case Op::Historically:
      return Formula::negation(
          Formula::since(f.interval(), top, Formula::negation(normalize(f.lhs()))));
    case Op::Once:
      return Formula::since(f.interval(), top, normalize(f.lhs()));
    case Op::Until:
      return Formula::until(f.interval(), normalize(f.lhs()), normalize(f.rhs()));
    case Op::Since:
      return Formula::since(f.interval(), normalize(f.lhs()), normalize(f.rhs()));
    case Op::Next:
      return Formula::next(normalize(f.lhs()));
    case Op::Prev:
      return Formula::prev(normalize(f.lhs()));
  }
  throw std::logic_error("unhandled operator");
}

namespace {

struct Missing {};  // a demanded sample lies past the end of the trace

struct Real {
  using V = double;
  double kappa;
  V truth(bool b) const { return b ? kInfinity : -kInfinity; }
  V less(double v, double c, bool strict) const {
    (void)strict;
    return c - v;
  }
  V prop(double v) const { return v != 0.0 ? kappa : -kappa; }
  V neg(V a) const { return -a; }
  V min_of(const std::vector<V>& xs) const {
    V m = kInfinity;
    for (V x : xs) m = std::min(m, x);
    return m;
  }
  V max_of(const std::vector<V>& xs) const {
    V m = -kInfinity;
    for (V x : xs) m = std::max(m, x);
    return m;
  }
};

struct Truth {
  using V = bool;
  V truth(bool b) const { return b; }
  V less(double v, double c, bool strict) const { return strict ? v < c : v <= c; }
  V prop(double v) const { return v != 0.0; }
  V neg(V a) const { return !a; }
  V min_of(const std::vector<V>& xs) const {
    return std::all_of(xs.begin(), xs.end(), [](V x) { return x; });
  }
  V max_of(const std::vector<V>& xs) const {
    return std::any_of(xs.begin(), xs.end(), [](V x) { return x; });
  }
};

template <class D>
typename D::V eval(const D& d, const Formula& f, const Trace& tr, std::size_t n) {
  using V = typename D::V;
  const std::size_t len = tr.size();
  switch (f.op()) {
    case Op::Constant:
      return d.truth(f.value());
    case Op::Atom: {
      if (const auto* c = std::get_if<Comparison>(&f.atom())) {
        double v = tr.value(n, tr.schema().column(c->variable));
        return d.less(v, c->constant, c->comparator == Comparator::Less);
      }
      return d.prop(tr.value(n, tr.schema().column(std::get<Proposition>(f.atom()).name)));
    }
    case Op::Not:
      return d.neg(eval(d, f.lhs(), tr, n));
    case Op::And:
    case Op::Or: {
      std::vector<V> both{eval(d, f.lhs(), tr, n), eval(d, f.rhs(), tr, n)};
      return f.op() == Op::And ? d.min_of(both) : d.max_of(both);
    }
    case Op::Until: {
      const Interval& I = f.interval();
      if (tr.time(len - 1) - tr.time(n) < I.hi - kTimeTolerance) throw Missing{};
      std::vector<std::size_t> goals;
      for (std::size_t k = n; k < len; ++k) {
        if (I.contains(tr.time(k) - tr.time(n))) goals.push_back(k);
      }
      std::vector<V> candidates;
      for (std::size_t g : goals) {
        std::vector<V> terms{eval(d, f.rhs(), tr, g)};
        std::vector<V> hold;
        for (std::size_t k = n; k < g; ++k) hold.push_back(eval(d, f.lhs(), tr, k));
        terms.push_back(d.min_of(hold));
        candidates.push_back(d.min_of(terms));
      }
      return d.max_of(candidates);
    }
    case Op::Since: {
      const Interval& I = f.interval();
      std::vector<std::size_t> goals;
      for (std::size_t k = 0; k <= n; ++k) {
        if (I.contains(tr.time(n) - tr.time(k))) goals.push_back(k);
      }
      std::vector<V> candidates;
      for (std::size_t g : goals) {
        std::vector<V> terms{eval(d, f.rhs(), tr, g)};
        std::vector<V> hold;
        for (std::size_t k = g + 1; k <= n; ++k) hold.push_back(eval(d, f.lhs(), tr, k));
        terms.push_back(d.min_of(hold));
        candidates.push_back(d.min_of(terms));
      }
      return d.max_of(candidates);
    }
    case Op::Next:
      if (n + 1 >= len) throw Missing{};
      return eval(d, f.lhs(), tr, n + 1);
    case Op::Prev:
      if (n == 0) return d.truth(false);
      return eval(d, f.lhs(), tr, n - 1);
    default:
      throw std::logic_error("oracle expects a normalized formula");
  }
}

template <class D>
std::optional<typename D::V> run(const D& d, const Formula& f, const Trace& tr, std::size_t n) {
  if (n >= tr.size()) throw std::out_of_range("sample index outside trace");
  try {
    return eval(d, normalize(f), tr, n);
  } catch (const Missing&) {
    return std::nullopt;
  }
}

}  // namespace

std::optional<double> robustness(const Formula& f, const Trace& trace, std::size_t n,
                                 double bool_magnitude) {
  return run(Real{bool_magnitude}, f, trace, n);
}

std::optional<bool> satisfied(const Formula& f, const Trace& trace, std::size_t n) {
  return run(Truth{}, f, trace, n);
}

}  // namespace stlrl::oracle
