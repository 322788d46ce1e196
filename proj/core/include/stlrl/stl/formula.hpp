#pragma once

#include <memory>
#include <string>
#include <variant>

#include "stlrl/stl/interval.hpp"

namespace stlrl {

enum class Comparator { Less, LessEqual, Greater, GreaterEqual };

/// `variable ~ constant` over a real signal.
struct Comparison {
  std::string variable;
  Comparator comparator = Comparator::LessEqual;
  double constant = 0.0;

  friend bool operator==(const Comparison&, const Comparison&) = default;
};

/// Bare boolean signal.
struct Proposition {
  std::string name;

  friend bool operator==(const Proposition&, const Proposition&) = default;
};

using Atom = std::variant<Comparison, Proposition>;

enum class Op {
  Constant,
  Atom,
  Not,
  And,
  Or,
  Implies,
  Always,
  Eventually,
  Until,
  Since,
  Historically,
  Once,
  Next,
  Prev,
};

bool is_unary(Op op);
bool is_binary(Op op);
bool has_interval(Op op);
bool is_future_temporal(Op op);  // Always, Eventually, Until
bool is_past_temporal(Op op);    // Since, Historically, Once
const char* op_name(Op op);

/// Immutable temporal-logic syntax tree. Copies share structure, so a
/// Formula is cheap to pass by value and safe to read from many threads.
///
/// Children: unary operators keep their operand in `lhs()`. For Until and
/// Since `lhs()` is the formula that must keep holding and `rhs()` the goal.
class Formula {
 public:
  Formula();  // the constant `true`

  static Formula constant(bool value);
  static Formula atom(Atom a);
  static Formula comparison(std::string variable, Comparator cmp, double constant);
  static Formula proposition(std::string name);
  static Formula negation(Formula f);
  static Formula conjunction(Formula a, Formula b);
  static Formula disjunction(Formula a, Formula b);
  static Formula implication(Formula a, Formula b);
  static Formula always(Interval i, Formula f);
  static Formula eventually(Interval i, Formula f);
  static Formula until(Interval i, Formula hold, Formula goal);
  static Formula since(Interval i, Formula hold, Formula goal);
  static Formula historically(Interval i, Formula f);
  static Formula once(Interval i, Formula f);
  static Formula next(Formula f);
  static Formula prev(Formula f);

  Op op() const;
  bool value() const;              // Constant only
  const Atom& atom() const;        // Atom only
  const Interval& interval() const;
  const Formula& lhs() const;
  const Formula& rhs() const;

  /// Number of nodes in the tree.
  std::size_t size() const;
  std::size_t depth() const;

  friend bool operator==(const Formula& a, const Formula& b);

 private:
  struct Node;
  explicit Formula(std::shared_ptr<const Node> node);
  static Formula make_unary(Op op, Interval i, Formula f);
  static Formula make_binary(Op op, Interval i, Formula a, Formula b);

  std::shared_ptr<const Node> node_;
};

/// Canonical text form; parse_formula(to_string(f)) == f.
std::string to_string(const Formula& f);

/// Shortest decimal text that reads back to the same double; `inf` for +inf.
std::string format_number(double x);

}  // namespace stlrl
