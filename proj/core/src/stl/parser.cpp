#include "stlrl/stl/parser.hpp"

#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>
#include <vector>

#include "stlrl/stl/reach.hpp"

namespace stlrl {

ParseError::ParseError(const std::string& message, int line, int column)
    : std::runtime_error(std::to_string(line) + ":" + std::to_string(column) + ": " + message),
      line_(line),
      column_(column),
      detail_(message) {}

LifeLongProperty::LifeLongProperty(Formula body) : body_(std::move(body)) {
  if (!future_reach(body_).finite()) {
    throw std::invalid_argument("life-long property body has unbounded future reach");
  }
  if (!past_reach(body_).finite()) {
    throw std::invalid_argument("life-long property body has unbounded past reach");
  }
}

Formula LifeLongProperty::formula() const { return Formula::always(Interval::unbounded(), body_); }

LifeLongProperty as_life_long(const Formula& f) {
  if (f.op() != Op::Always || !f.interval().is_unbounded_default()) {
    throw std::invalid_argument("a life-long property must have the form G phi");
  }
  return LifeLongProperty(f.lhs());
}

namespace {

enum class Tok {
  Ident,
  Number,
  LParen,
  RParen,
  LBracket,
  RBracket,
  Comma,
  Not,
  And,
  Or,
  Arrow,
  Less,
  LessEq,
  Greater,
  GreaterEq,
  Assign,
  End,
};

struct Token {
  Tok kind = Tok::End;
  std::string text;
  double number = 0.0;
  int line = 1;
  int column = 1;
};

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    for (;;) {
      skip_space();
      Token t;
      t.line = line_;
      t.column = col_;
      if (pos_ >= src_.size()) {
        out.push_back(t);
        return out;
      }
      char c = src_[pos_];
      if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        std::size_t start = pos_;
        while (pos_ < src_.size() &&
               (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_')) {
          advance();
        }
        t.kind = Tok::Ident;
        t.text = std::string(src_.substr(start, pos_ - start));
      } else if (std::isdigit(static_cast<unsigned char>(c)) || c == '.' ||
                 (c == '-' && pos_ + 1 < src_.size() &&
                  (std::isdigit(static_cast<unsigned char>(src_[pos_ + 1])) ||
                   src_[pos_ + 1] == '.'))) {
        lex_number(t);
      } else {
        lex_symbol(t);
      }
      out.push_back(std::move(t));
    }
  }

 private:
  void advance() {
    if (src_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  void skip_space() {
    while (pos_ < src_.size()) {
      char c = src_[pos_];
      if (c == '#') {
        while (pos_ < src_.size() && src_[pos_] != '\n') advance();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else {
        return;
      }
    }
  }

  void lex_number(Token& t) {
    std::size_t start = pos_;
    if (src_[pos_] == '-') advance();
    while (pos_ < src_.size() &&
           (std::isdigit(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '.')) {
      advance();
    }
    if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
      advance();
      if (pos_ < src_.size() && (src_[pos_] == '+' || src_[pos_] == '-')) advance();
      while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) advance();
    }
    std::string_view text = src_.substr(start, pos_ - start);
    double value = 0.0;
    auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || end != text.data() + text.size()) {
      throw ParseError("malformed number '" + std::string(text) + "'", t.line, t.column);
    }
    t.kind = Tok::Number;
    t.text = std::string(text);
    t.number = value;
  }

  void lex_symbol(Token& t) {
    char c = src_[pos_];
    char n = pos_ + 1 < src_.size() ? src_[pos_ + 1] : '\0';
    auto take = [&](Tok kind, int len) {
      t.kind = kind;
      t.text = std::string(src_.substr(pos_, len));
      for (int i = 0; i < len; ++i) advance();
    };
    switch (c) {
      case '(': take(Tok::LParen, 1); return;
      case ')': take(Tok::RParen, 1); return;
      case '[': take(Tok::LBracket, 1); return;
      case ']': take(Tok::RBracket, 1); return;
      case ',': take(Tok::Comma, 1); return;
      case '!': take(Tok::Not, 1); return;
      case '=': take(Tok::Assign, 1); return;
      case '&': take(Tok::And, n == '&' ? 2 : 1); return;
      case '|': take(Tok::Or, n == '|' ? 2 : 1); return;
      case '-':
        if (n == '>') {
          take(Tok::Arrow, 2);
          return;
        }
        break;
      case '<': n == '=' ? take(Tok::LessEq, 2) : take(Tok::Less, 1); return;
      case '>': n == '=' ? take(Tok::GreaterEq, 2) : take(Tok::Greater, 1); return;
      default:
        break;
    }
    throw ParseError(std::string("unexpected character '") + c + "'", t.line, t.column);
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

bool is_keyword(const std::string& s) {
  static const char* const kKeywords[] = {"G",    "F",     "H",   "O",    "X",    "P",    "U",
                                          "S",    "true",  "false", "inf", "real", "bool", "param"};
  for (const char* k : kKeywords) {
    if (s == k) return true;
  }
  return false;
}

bool is_comparator(Tok t) {
  return t == Tok::Less || t == Tok::LessEq || t == Tok::Greater || t == Tok::GreaterEq;
}

Comparator to_comparator(Tok t) {
  switch (t) {
    case Tok::Less: return Comparator::Less;
    case Tok::LessEq: return Comparator::LessEqual;
    case Tok::Greater: return Comparator::Greater;
    default: return Comparator::GreaterEqual;
  }
}

// c ~ v  is  v ~' c
Comparator mirror(Comparator c) {
  switch (c) {
    case Comparator::Less: return Comparator::Greater;
    case Comparator::LessEqual: return Comparator::GreaterEqual;
    case Comparator::Greater: return Comparator::Less;
    case Comparator::GreaterEqual: return Comparator::LessEqual;
  }
  return c;
}

class Parser {
 public:
  Parser(std::vector<Token> tokens, const SignalSchema* schema, const ParamTable* params)
      : toks_(std::move(tokens)), schema_(schema), params_(params) {}

  /// Declarations at the head of a property file.
  void declarations(SignalSchema& schema, ParamTable& params, const ParamTable& overrides) {
    while (peek().kind == Tok::Ident &&
           (peek().text == "real" || peek().text == "bool" || peek().text == "param")) {
      Token kw = take();
      Token name = expect(Tok::Ident, "a name after '" + kw.text + "'");
      if (is_keyword(name.text)) fail("'" + name.text + "' is reserved", name);
      if (schema.find(name.text) || params.count(name.text)) {
        fail("'" + name.text + "' declared twice", name);
      }
      if (kw.text == "param") {
        expect(Tok::Assign, "'=' in param declaration");
        Token value = expect(Tok::Number, "a number");
        params[name.text] = value.number;
      } else {
        schema.add(name.text, kw.text == "real" ? SignalKind::Real : SignalKind::Bool);
      }
    }
    for (const auto& [name, value] : overrides) {
      auto it = params.find(name);
      if (it == params.end()) {
        throw std::invalid_argument("override for undeclared param '" + name + "'");
      }
      it->second = value;
    }
  }

  Formula formula_to_end() {
    if (peek().kind == Tok::End) fail("expected a formula", peek());
    Formula f = implication();
    if (peek().kind != Tok::End) fail("unexpected '" + peek().text + "' after formula", peek());
    return f;
  }

  const Token& peek(std::size_t ahead = 0) const {
    std::size_t i = std::min(pos_ + ahead, toks_.size() - 1);
    return toks_[i];
  }

  std::size_t position() const { return pos_; }

 private:
  Token take() {
    Token t = peek();
    if (pos_ < toks_.size() - 1) ++pos_;
    return t;
  }

  [[noreturn]] void fail(const std::string& msg, const Token& at) const {
    throw ParseError(msg, at.line, at.column);
  }

  Token expect(Tok kind, const std::string& what) {
    if (peek().kind != kind) {
      fail("expected " + what + (peek().kind == Tok::End ? " before end of input"
                                                          : ", found '" + peek().text + "'"),
           peek());
    }
    return take();
  }

  bool at_keyword(const char* k) const { return peek().kind == Tok::Ident && peek().text == k; }

  Formula implication() {
    Formula lhs = disjunction();
    if (peek().kind == Tok::Arrow) {
      take();
      return Formula::implication(std::move(lhs), implication());
    }
    return lhs;
  }

  Formula disjunction() {
    Formula f = conjunction();
    while (peek().kind == Tok::Or) {
      take();
      f = Formula::disjunction(std::move(f), conjunction());
    }
    return f;
  }

  Formula conjunction() {
    Formula f = binary_temporal();
    while (peek().kind == Tok::And) {
      take();
      f = Formula::conjunction(std::move(f), binary_temporal());
    }
    return f;
  }

  Formula binary_temporal() {
    Formula lhs = unary();
    if (at_keyword("U") || at_keyword("S")) {
      Token kw = take();
      Interval i = optional_interval();
      Formula rhs = binary_temporal();
      return kw.text == "U" ? Formula::until(i, std::move(lhs), std::move(rhs))
                            : Formula::since(i, std::move(lhs), std::move(rhs));
    }
    return lhs;
  }

  Formula unary() {
    if (peek().kind == Tok::Not) {
      take();
      return Formula::negation(unary());
    }
    if (peek().kind == Tok::Ident) {
      const std::string& k = peek().text;
      if (k == "G" || k == "F" || k == "H" || k == "O") {
        Token kw = take();
        Interval i = optional_interval();
        Formula f = unary();
        switch (kw.text[0]) {
          case 'G': return Formula::always(i, std::move(f));
          case 'F': return Formula::eventually(i, std::move(f));
          case 'H': return Formula::historically(i, std::move(f));
          default: return Formula::once(i, std::move(f));
        }
      }
      if (k == "X" || k == "P") {
        Token kw = take();
        if (peek().kind == Tok::LBracket) fail("'" + kw.text + "' takes no interval", peek());
        Formula f = unary();
        return kw.text == "X" ? Formula::next(std::move(f)) : Formula::prev(std::move(f));
      }
    }
    return primary();
  }

  Interval optional_interval() {
    if (peek().kind != Tok::LBracket) return Interval::unbounded();
    Token open = take();
    double lo = bound();
    expect(Tok::Comma, "',' in interval");
    double hi = bound();
    expect(Tok::RBracket, "']' closing interval");
    if (lo < 0 || hi < 0) fail("interval bounds must be non-negative", open);
    if (lo > hi) fail("interval lower bound exceeds upper bound", open);
    if (lo == kInfinity) fail("interval lower bound must be finite", open);
    return Interval{lo, hi};
  }

  double bound() {
    const Token& t = peek();
    if (t.kind == Tok::Number) return take().number;
    if (t.kind == Tok::Ident && t.text == "inf") {
      take();
      return kInfinity;
    }
    if (t.kind == Tok::Ident) {
      if (auto v = param(t.text)) {
        take();
        return *v;
      }
      fail("unknown parameter '" + t.text + "' in interval", t);
    }
    fail("expected an interval bound", t);
  }

  std::optional<double> param(const std::string& name) const {
    if (!params_) return std::nullopt;
    auto it = params_->find(name);
    if (it == params_->end()) return std::nullopt;
    return it->second;
  }

  // A numeric operand: literal or declared param.
  bool at_constant() const {
    const Token& t = peek();
    return t.kind == Tok::Number || (t.kind == Tok::Ident && param(t.text).has_value());
  }

  double constant() {
    Token t = take();
    if (t.kind == Tok::Number) return t.number;
    return *param(t.text);
  }

  std::string real_signal(const Token& t) const {
    if (t.kind != Tok::Ident || is_keyword(t.text)) fail("expected a signal name", t);
    auto col = schema_->find(t.text);
    if (!col) fail("unknown identifier '" + t.text + "'", t);
    if ((*schema_)[*col].kind != SignalKind::Real) {
      fail("'" + t.text + "' is boolean and cannot be compared", t);
    }
    return t.text;
  }

  Formula primary() {
    const Token& t = peek();
    if (t.kind == Tok::LParen) {
      take();
      Formula f = implication();
      expect(Tok::RParen, "')'");
      return f;
    }
    if (at_constant() && is_comparator(peek(1).kind)) {
      double c = constant();
      Comparator cmp = mirror(to_comparator(take().kind));
      Token var = take();
      return Formula::comparison(real_signal(var), cmp, c);
    }
    if (t.kind == Tok::Ident) {
      if (t.text == "true" || t.text == "false") {
        return Formula::constant(take().text == "true");
      }
      if (is_keyword(t.text)) fail("unexpected keyword '" + t.text + "'", t);
      if (is_comparator(peek(1).kind)) {
        Token var = take();
        std::string name = real_signal(var);
        Comparator cmp = to_comparator(take().kind);
        if (!at_constant()) fail("expected a number or parameter after comparator", peek());
        return Formula::comparison(std::move(name), cmp, constant());
      }
      Token name = take();
      auto col = schema_->find(name.text);
      if (!col) {
        if (param(name.text)) fail("parameter '" + name.text + "' used as a formula", name);
        fail("unknown identifier '" + name.text + "'", name);
      }
      if ((*schema_)[*col].kind != SignalKind::Bool) {
        fail("real signal '" + name.text + "' needs a comparison", name);
      }
      return Formula::proposition(name.text);
    }
    if (t.kind == Tok::End) fail("unexpected end of input", t);
    fail("unexpected '" + t.text + "'", t);
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  const SignalSchema* schema_;
  const ParamTable* params_;
};

}  // namespace

Formula parse_formula(std::string_view text, const SignalSchema& schema, const ParamTable& params) {
  Parser p(Lexer(text).run(), &schema, &params);
  return p.formula_to_end();
}

PropertyFile parse_property_file(std::string_view text, const ParamTable& overrides) {
  auto tokens = Lexer(text).run();
  SignalSchema schema;
  ParamTable params;
  {
    Parser head(tokens, &schema, &params);
    head.declarations(schema, params, overrides);
    tokens.erase(tokens.begin(), tokens.begin() + static_cast<std::ptrdiff_t>(head.position()));
  }
  if (schema.empty()) throw ParseError("property file declares no signals", 1, 1);
  Token first = tokens.front();
  Parser body(std::move(tokens), &schema, &params);
  Formula f = body.formula_to_end();
  try {
    LifeLongProperty property = as_life_long(f);
    return PropertyFile{std::move(schema), std::move(params), std::move(property), to_string(f)};
  } catch (const std::invalid_argument& e) {
    throw ParseError(e.what(), first.line, first.column);
  }
}

PropertyFile load_property_file(const std::string& path, const ParamTable& overrides) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open property file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_property_file(ss.str(), overrides);
}

}  // namespace stlrl
