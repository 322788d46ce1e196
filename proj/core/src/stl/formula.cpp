#include "stlrl/stl/formula.hpp"

#include <algorithm>
#include <charconv>
#include <stdexcept>

namespace stlrl {

Interval Interval::make(double lo, double hi) {
  if (!(lo >= 0.0)) throw std::invalid_argument("interval lower bound must be non-negative");
  if (!(lo <= hi)) throw std::invalid_argument("interval lower bound exceeds upper bound");
  if (lo == kInfinity) throw std::invalid_argument("interval lower bound must be finite");
  return {lo, hi};
}

struct Formula::Node {
  Op op = Op::Constant;
  bool value = true;
  Atom atom;
  Interval interval;
  Formula lhs;
  Formula rhs;
  std::size_t size = 1;
  std::size_t depth = 1;

  // Leaf nodes hold empty children; the default Formula would recurse.
  explicit Node(Op o) : op(o), lhs(nullptr), rhs(nullptr) {}
};

bool is_unary(Op op) {
  switch (op) {
    case Op::Not:
    case Op::Always:
    case Op::Eventually:
    case Op::Historically:
    case Op::Once:
    case Op::Next:
    case Op::Prev:
      return true;
    default:
      return false;
  }
}

bool is_binary(Op op) {
  switch (op) {
    case Op::And:
    case Op::Or:
    case Op::Implies:
    case Op::Until:
    case Op::Since:
      return true;
    default:
      return false;
  }
}

bool has_interval(Op op) { return is_future_temporal(op) || is_past_temporal(op); }

bool is_future_temporal(Op op) {
  return op == Op::Always || op == Op::Eventually || op == Op::Until;
}

bool is_past_temporal(Op op) {
  return op == Op::Historically || op == Op::Once || op == Op::Since;
}

const char* op_name(Op op) {
  switch (op) {
    case Op::Constant: return "constant";
    case Op::Atom: return "atom";
    case Op::Not: return "not";
    case Op::And: return "and";
    case Op::Or: return "or";
    case Op::Implies: return "implies";
    case Op::Always: return "always";
    case Op::Eventually: return "eventually";
    case Op::Until: return "until";
    case Op::Since: return "since";
    case Op::Historically: return "historically";
    case Op::Once: return "once";
    case Op::Next: return "next";
    case Op::Prev: return "prev";
  }
  return "?";
}

Formula::Formula() : Formula(constant(true)) {}

Formula::Formula(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

Formula Formula::constant(bool value) {
  auto n = std::make_shared<Node>(Op::Constant);
  n->value = value;
  return Formula(std::move(n));
}

Formula Formula::atom(Atom a) {
  if (const auto* c = std::get_if<Comparison>(&a); c && c->variable.empty()) {
    throw std::invalid_argument("comparison needs a variable name");
  }
  if (const auto* p = std::get_if<Proposition>(&a); p && p->name.empty()) {
    throw std::invalid_argument("proposition needs a name");
  }
  auto n = std::make_shared<Node>(Op::Atom);
  n->atom = std::move(a);
  return Formula(std::move(n));
}

Formula Formula::comparison(std::string variable, Comparator cmp, double constant) {
  return atom(Comparison{std::move(variable), cmp, constant});
}

Formula Formula::proposition(std::string name) { return atom(Proposition{std::move(name)}); }

Formula Formula::make_unary(Op op, Interval i, Formula f) {
  auto n = std::make_shared<Node>(op);
  n->interval = i;
  n->size = f.size() + 1;
  n->depth = f.depth() + 1;
  n->lhs = std::move(f);
  return Formula(std::move(n));
}

Formula Formula::make_binary(Op op, Interval i, Formula a, Formula b) {
  auto n = std::make_shared<Node>(op);
  n->interval = i;
  n->size = a.size() + b.size() + 1;
  n->depth = std::max(a.depth(), b.depth()) + 1;
  n->lhs = std::move(a);
  n->rhs = std::move(b);
  return Formula(std::move(n));
}

Formula Formula::negation(Formula f) { return make_unary(Op::Not, {}, std::move(f)); }
Formula Formula::conjunction(Formula a, Formula b) {
  return make_binary(Op::And, {}, std::move(a), std::move(b));
}
Formula Formula::disjunction(Formula a, Formula b) {
  return make_binary(Op::Or, {}, std::move(a), std::move(b));
}
Formula Formula::implication(Formula a, Formula b) {
  return make_binary(Op::Implies, {}, std::move(a), std::move(b));
}
Formula Formula::always(Interval i, Formula f) {
  return make_unary(Op::Always, Interval::make(i.lo, i.hi), std::move(f));
}
Formula Formula::eventually(Interval i, Formula f) {
  return make_unary(Op::Eventually, Interval::make(i.lo, i.hi), std::move(f));
}
Formula Formula::until(Interval i, Formula hold, Formula goal) {
  return make_binary(Op::Until, Interval::make(i.lo, i.hi), std::move(hold), std::move(goal));
}
Formula Formula::since(Interval i, Formula hold, Formula goal) {
  return make_binary(Op::Since, Interval::make(i.lo, i.hi), std::move(hold), std::move(goal));
}
Formula Formula::historically(Interval i, Formula f) {
  return make_unary(Op::Historically, Interval::make(i.lo, i.hi), std::move(f));
}
Formula Formula::once(Interval i, Formula f) {
  return make_unary(Op::Once, Interval::make(i.lo, i.hi), std::move(f));
}
Formula Formula::next(Formula f) { return make_unary(Op::Next, {}, std::move(f)); }
Formula Formula::prev(Formula f) { return make_unary(Op::Prev, {}, std::move(f)); }

Op Formula::op() const { return node_->op; }

bool Formula::value() const {
  if (node_->op != Op::Constant) throw std::logic_error("value() on non-constant formula");
  return node_->value;
}

const Atom& Formula::atom() const {
  if (node_->op != Op::Atom) throw std::logic_error("atom() on non-atomic formula");
  return node_->atom;
}

const Interval& Formula::interval() const { return node_->interval; }

const Formula& Formula::lhs() const {
  if (!is_unary(node_->op) && !is_binary(node_->op)) {
    throw std::logic_error("lhs() on leaf formula");
  }
  return node_->lhs;
}

const Formula& Formula::rhs() const {
  if (!is_binary(node_->op)) throw std::logic_error("rhs() on non-binary formula");
  return node_->rhs;
}

std::size_t Formula::size() const { return node_->size; }
std::size_t Formula::depth() const { return node_->depth; }

bool operator==(const Formula& a, const Formula& b) {
  if (a.node_ == b.node_) return true;
  const auto& x = *a.node_;
  const auto& y = *b.node_;
  if (x.op != y.op) return false;
  switch (x.op) {
    case Op::Constant:
      return x.value == y.value;
    case Op::Atom:
      return x.atom == y.atom;
    default:
      break;
  }
  if (has_interval(x.op) && !(x.interval == y.interval)) return false;
  if (!(x.lhs == y.lhs)) return false;
  return !is_binary(x.op) || x.rhs == y.rhs;
}

std::string format_number(double x) {
  if (x == kInfinity) return "inf";
  if (x == -kInfinity) return "-inf";
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x);
  if (ec != std::errc{}) throw std::runtime_error("number formatting failed");
  return std::string(buf, end);
}

namespace {

const char* comparator_text(Comparator c) {
  switch (c) {
    case Comparator::Less: return "<";
    case Comparator::LessEqual: return "<=";
    case Comparator::Greater: return ">";
    case Comparator::GreaterEqual: return ">=";
  }
  return "?";
}

void print(const Formula& f, std::string& out);

void print_interval(const Interval& i, std::string& out) {
  if (i.is_unbounded_default()) return;
  out += '[';
  out += format_number(i.lo);
  out += ',';
  out += format_number(i.hi);
  out += ']';
}

void print_prefix(const char* keyword, const Formula& f, std::string& out) {
  out += keyword;
  if (has_interval(f.op())) print_interval(f.interval(), out);
  out += ' ';
  print(f.lhs(), out);
}

void print_infix(const char* keyword, const Formula& f, std::string& out) {
  out += '(';
  print(f.lhs(), out);
  out += ' ';
  out += keyword;
  if (has_interval(f.op())) print_interval(f.interval(), out);
  out += ' ';
  print(f.rhs(), out);
  out += ')';
}

void print(const Formula& f, std::string& out) {
  switch (f.op()) {
    case Op::Constant:
      out += f.value() ? "true" : "false";
      return;
    case Op::Atom:
      if (const auto* c = std::get_if<Comparison>(&f.atom())) {
        out += '(';
        out += c->variable;
        out += ' ';
        out += comparator_text(c->comparator);
        out += ' ';
        out += format_number(c->constant);
        out += ')';
      } else {
        out += std::get<Proposition>(f.atom()).name;
      }
      return;
    case Op::Not: print_prefix("!", f, out); return;
    case Op::Always: print_prefix("G", f, out); return;
    case Op::Eventually: print_prefix("F", f, out); return;
    case Op::Historically: print_prefix("H", f, out); return;
    case Op::Once: print_prefix("O", f, out); return;
    case Op::Next: print_prefix("X", f, out); return;
    case Op::Prev: print_prefix("P", f, out); return;
    case Op::And: print_infix("&", f, out); return;
    case Op::Or: print_infix("|", f, out); return;
    case Op::Implies: print_infix("->", f, out); return;
    case Op::Until: print_infix("U", f, out); return;
    case Op::Since: print_infix("S", f, out); return;
  }
}

}  // namespace

std::string to_string(const Formula& f) {
  std::string out;
  print(f, out);
  return out;
}

}  // namespace stlrl
