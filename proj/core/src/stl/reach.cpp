#include "stlrl/stl/reach.hpp"

#include <algorithm>
#include <stdexcept>

namespace stlrl {

namespace {

Reach join(const Reach& a, const Reach& b) {
  return {std::max(a.seconds, b.seconds), std::max(a.steps, b.steps)};
}

Reach extend(Reach r, double seconds) {
  r.seconds += seconds;
  return r;
}

// Looking the other way by at least `seconds` cancels that much reach.
Reach offset(Reach r, double seconds) {
  if (r.seconds != kInfinity) r.seconds = std::max(0.0, r.seconds - seconds);
  return r;
}

Reach add_step(Reach r) {
  ++r.steps;
  return r;
}

Reach drop_step(Reach r) {
  if (r.steps > 0) --r.steps;
  return r;
}

enum class Direction { Future, Past };

Reach reach(const Formula& f, Direction dir) {
  const bool future = dir == Direction::Future;
  switch (f.op()) {
    case Op::Constant:
    case Op::Atom:
      return {};
    case Op::Not:
      return reach(f.lhs(), dir);
    case Op::And:
    case Op::Or:
    case Op::Implies:
      return join(reach(f.lhs(), dir), reach(f.rhs(), dir));
    case Op::Always:
    case Op::Eventually: {
      Reach r = reach(f.lhs(), dir);
      return future ? extend(r, f.interval().hi) : offset(r, f.interval().lo);
    }
    case Op::Until: {
      Reach r = join(reach(f.lhs(), dir), reach(f.rhs(), dir));
      if (future) return extend(r, f.interval().hi);
      // The goal is at least lo ahead; the hold part starts at the instant itself.
      return join(reach(f.lhs(), dir), offset(reach(f.rhs(), dir), f.interval().lo));
    }
    case Op::Historically:
    case Op::Once: {
      Reach r = reach(f.lhs(), dir);
      return future ? offset(r, f.interval().lo) : extend(r, f.interval().hi);
    }
    case Op::Since: {
      if (!future) return extend(join(reach(f.lhs(), dir), reach(f.rhs(), dir)), f.interval().hi);
      return join(reach(f.lhs(), dir), offset(reach(f.rhs(), dir), f.interval().lo));
    }
    case Op::Next:
      return future ? add_step(reach(f.lhs(), dir)) : drop_step(reach(f.lhs(), dir));
    case Op::Prev:
      return future ? drop_step(reach(f.lhs(), dir)) : add_step(reach(f.lhs(), dir));
  }
  return {};
}

}  // namespace

Reach future_reach(const Formula& f) { return reach(f, Direction::Future); }

Reach past_reach(const Formula& f) { return reach(f, Direction::Past); }

bool is_past_dependent(const Formula& f) { return future_reach(f).zero(); }

LifeLongProperty to_past_dependent(const LifeLongProperty& psi) {
  const Reach h = future_reach(psi.body());
  if (!h.finite()) {
    throw std::invalid_argument("cannot make a property with unbounded future reach past-dependent");
  }
  if (h.zero()) return psi;
  Formula body = psi.body();
  if (h.seconds > 0.0) body = Formula::historically(Interval::make(h.seconds, h.seconds), body);
  for (std::size_t k = 0; k < h.steps; ++k) body = Formula::prev(body);
  return LifeLongProperty(std::move(body));
}

LifeLongProperty to_past_dependent(const LifeLongProperty& psi, double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("sampling step must be positive");
  const Reach h = future_reach(psi.body());
  if (!h.finite()) {
    throw std::invalid_argument("cannot make a property with unbounded future reach past-dependent");
  }
  if (h.zero()) return psi;
  const double c = h.resolve(dt);
  return LifeLongProperty(Formula::historically(Interval::make(c, c), psi.body()));
}

}  // namespace stlrl
