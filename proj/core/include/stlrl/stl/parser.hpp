#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <string_view>

#include "stlrl/stl/formula.hpp"
#include "stlrl/stl/schema.hpp"

namespace stlrl {

/// Named numeric constants usable wherever a number is expected.
using ParamTable = std::map<std::string, double, std::less<>>;

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& message, int line, int column);

  int line() const { return line_; }
  int column() const { return column_; }
  const std::string& detail() const { return detail_; }

 private:
  int line_;
  int column_;
  std::string detail_;
};

/// Life-long property `G body`. Construction checks that both reaches of the
/// body are finite.
class LifeLongProperty {
 public:
  explicit LifeLongProperty(Formula body);

  const Formula& body() const { return body_; }
  Formula formula() const;  // G body

  friend bool operator==(const LifeLongProperty&, const LifeLongProperty&) = default;

 private:
  Formula body_;
};

/// A parsed property file: schema header, parameters and the property.
struct PropertyFile {
  SignalSchema schema;
  ParamTable params;
  LifeLongProperty property;
  std::string source;  // formula text as written
};

/// Parses a formula. Identifiers resolve to signals in `schema` or to
/// entries of `params`; anything else is an error.
Formula parse_formula(std::string_view text, const SignalSchema& schema,
                      const ParamTable& params = {});

/// Parses a property file (see docs/grammar.ebnf). `overrides` replace
/// `param` values declared in the file before the formula is parsed.
PropertyFile parse_property_file(std::string_view text, const ParamTable& overrides = {});

/// Reads and parses a property file from disk.
PropertyFile load_property_file(const std::string& path, const ParamTable& overrides = {});

/// Splits `G body` into its body; throws std::invalid_argument if the
/// formula is not an unbounded Always.
LifeLongProperty as_life_long(const Formula& f);

}  // namespace stlrl
