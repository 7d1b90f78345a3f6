#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dimcheck/error.hpp"
#include "dimcheck/measure.hpp"
#include "dimcheck/quantlang/ast.hpp"

namespace dimcheck::quantlang {

/// Static type of an expression: a dimension, or boolean for comparisons.
struct ValueType {
  bool boolean = false;
  Dimension dimension;

  bool operator==(const ValueType&) const = default;
};

/// `boolean` or the rendered dimension.
std::string to_string(const ValueType& t);

/// A declared constant or variable. Constants carry their value.
struct Binding {
  std::string unit;
  std::optional<DecValue> value;
};

/// Units and names visible at a point of a program.
struct Scope {
  UnitRegistry units;
  std::map<std::string, Binding> names;
};

/// A located problem found while checking or evaluating.
struct Diagnostic {
  SourcePos pos;
  ErrorKind kind = ErrorKind::ParseError;
  std::string message;
  std::optional<Dimension> expected;
  std::optional<Dimension> actual;
};

/// Throws DimensionMismatch, UnknownName or UnknownUnit.
ValueType infer_dimension(const Expr& e, const Scope& scope);

/// As infer_dimension, but reports the failing node's position.
/// Throws Diagnostic.
ValueType infer_located(const Expr& e, const Scope& scope);

struct Verdict {
  SourcePos pos;
  /// Statement keyword, or the declaration keyword for a failed declaration.
  std::string subject;
  bool ok = true;
  ValueType type;
  /// Result of an evaluated eval or assert statement.
  std::string value;
  Diagnostic error;
};

struct CheckReport {
  std::vector<Verdict> verdicts;

  std::size_t error_count() const;
  bool ok() const { return error_count() == 0; }
};

/// Static check of every statement in order. Declarations only produce a
/// verdict when they fail; checking continues past every error.
CheckReport check_program(const Program& p, const UnitRegistry& reg);

/// check_program, then evaluation of the eval and assert statements that
/// passed. `values` binds variables to numbers in their declared units.
/// Unbound variables give UnboundVariable, false assertions AssertionFailed.
CheckReport run_program(const Program& p, const UnitRegistry& reg,
                        const std::map<std::string, DecValue>& values,
                        const PrecisionContext& ctx = {});

/// `<file>:<line>:<col>: <kind>: <message>` for errors,
/// `<file>:<line>:<col>: OK: <statement> <type>[ = <value>]` otherwise.
std::string format_plain(const Verdict& v, std::string_view file);

/// Tab-separated: file, line, column, statement, OK|ERROR, then the type and
/// value, or the error kind and message.
std::string format_machine(const Verdict& v, std::string_view file);

}  // namespace dimcheck::quantlang
