#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "dimcheck/decvalue.hpp"
#include "dimcheck/dimension.hpp"
#include "dimcheck/error.hpp"
#include "dimcheck/measure.hpp"
#include "dimcheck/quantlang/lexer.hpp"

namespace dimcheck::quantlang {

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

enum class ExprKind {
  Literal,   // number [unit]
  Variable,  // name
  Negate,    // -lhs
  Add,
  Subtract,
  Multiply,
  Divide,
  Power,     // lhs ^ exponent
  Compare,   // lhs op rhs, statement top level only
};

struct Expr {
  ExprKind kind = ExprKind::Literal;
  /// First token for literals and variables, the operator otherwise.
  SourcePos pos;
  DecValue number;
  /// Unit of a literal (empty for a bare number) or variable name.
  std::string name;
  std::int64_t exponent = 0;
  CompareOp op = CompareOp::Eq;
  ExprPtr lhs;
  ExprPtr rhs;
};

ExprPtr make_literal(DecValue number, std::string unit, SourcePos pos = {});
ExprPtr make_variable(std::string name, SourcePos pos = {});
ExprPtr make_negate(ExprPtr operand, SourcePos pos = {});
ExprPtr make_binary(ExprKind kind, ExprPtr lhs, ExprPtr rhs, SourcePos pos = {});
ExprPtr make_power(ExprPtr base, std::int64_t exponent, SourcePos pos = {});
ExprPtr make_compare(CompareOp op, ExprPtr lhs, ExprPtr rhs, SourcePos pos = {});

/// Same tree, ignoring source positions.
bool structurally_equal(const Expr& a, const Expr& b);

/// Source text with the fewest parentheses that parse back to the same tree.
std::string render(const Expr& e);

struct UnitDecl {
  std::string name;
  Dimension dimension;
  Rational scale{1};
  Rational offset{0};
};

struct DeriveDecl {
  std::string name;
  /// (true for '*', false for '/', unit); the first entry is always '*'.
  std::vector<std::pair<bool, std::string>> factors;
};

struct ConstDecl {
  std::string name;
  std::string unit;
  DecValue value;
};

struct VarDecl {
  std::string name;
  std::string unit;
};

enum class StatementKind { Check, Eval, Assert };

std::string_view statement_keyword(StatementKind kind) noexcept;

struct Statement {
  StatementKind kind = StatementKind::Check;
  ExprPtr expr;
};

/// A declaration or statement the parser could not read; kept so verdicts
/// stay in source order.
struct Malformed {
  ErrorKind kind = ErrorKind::ParseError;
  std::string message;
};

struct Item {
  SourcePos pos;
  std::variant<UnitDecl, DeriveDecl, ConstDecl, VarDecl, Statement, Malformed> node;
};

struct Program {
  std::vector<Item> items;
};

bool structurally_equal(const Program& a, const Program& b);

/// One item per line. Malformed items are omitted.
std::string render(const Program& p);

}  // namespace dimcheck::quantlang
