#include "dimcheck/quantlang/ast.hpp"

#include <sstream>

namespace dimcheck::quantlang {

namespace {

ExprPtr node(Expr e) { return std::make_shared<const Expr>(std::move(e)); }

// Binding strength, higher binds tighter.
int precedence(const Expr& e) {
  switch (e.kind) {
    case ExprKind::Compare: return 1;
    case ExprKind::Add:
    case ExprKind::Subtract: return 2;
    case ExprKind::Multiply:
    case ExprKind::Divide: return 3;
    case ExprKind::Power: return 4;
    case ExprKind::Negate:
    case ExprKind::Literal:
    case ExprKind::Variable: return 5;
  }
  return 0;
}

std::string_view symbol(const Expr& e) {
  switch (e.kind) {
    case ExprKind::Add: return "+";
    case ExprKind::Subtract: return "-";
    case ExprKind::Multiply: return "*";
    case ExprKind::Divide: return "/";
    case ExprKind::Compare:
      switch (e.op) {
        case CompareOp::Eq: return "==";
        case CompareOp::Ne: return "!=";
        case CompareOp::Lt: return "<";
        case CompareOp::Le: return "<=";
        case CompareOp::Gt: return ">";
        case CompareOp::Ge: return ">=";
      }
      break;
    default: break;
  }
  return "?";
}

std::string wrap_if(bool parens, const Expr& e) {
  return parens ? "(" + render(e) + ")" : render(e);
}

std::string rational_text(const Rational& r) { return r.to_string(); }

}  // namespace

ExprPtr make_literal(DecValue number, std::string unit, SourcePos pos) {
  Expr e;
  e.kind = ExprKind::Literal;
  e.number = std::move(number);
  e.name = std::move(unit);
  e.pos = pos;
  return node(std::move(e));
}

ExprPtr make_variable(std::string name, SourcePos pos) {
  Expr e;
  e.kind = ExprKind::Variable;
  e.name = std::move(name);
  e.pos = pos;
  return node(std::move(e));
}

ExprPtr make_negate(ExprPtr operand, SourcePos pos) {
  Expr e;
  e.kind = ExprKind::Negate;
  e.lhs = std::move(operand);
  e.pos = pos;
  return node(std::move(e));
}

ExprPtr make_binary(ExprKind kind, ExprPtr lhs, ExprPtr rhs, SourcePos pos) {
  Expr e;
  e.kind = kind;
  e.lhs = std::move(lhs);
  e.rhs = std::move(rhs);
  e.pos = pos;
  return node(std::move(e));
}

ExprPtr make_power(ExprPtr base, std::int64_t exponent, SourcePos pos) {
  Expr e;
  e.kind = ExprKind::Power;
  e.lhs = std::move(base);
  e.exponent = exponent;
  e.pos = pos;
  return node(std::move(e));
}

ExprPtr make_compare(CompareOp op, ExprPtr lhs, ExprPtr rhs, SourcePos pos) {
  Expr e;
  e.kind = ExprKind::Compare;
  e.op = op;
  e.lhs = std::move(lhs);
  e.rhs = std::move(rhs);
  e.pos = pos;
  return node(std::move(e));
}

bool structurally_equal(const Expr& a, const Expr& b) {
  if (a.kind != b.kind) return false;
  const auto same_child = [](const ExprPtr& x, const ExprPtr& y) {
    if (!x || !y) return !x && !y;
    return structurally_equal(*x, *y);
  };
  switch (a.kind) {
    case ExprKind::Literal: return a.number == b.number && a.name == b.name;
    case ExprKind::Variable: return a.name == b.name;
    case ExprKind::Negate: return same_child(a.lhs, b.lhs);
    case ExprKind::Power: return a.exponent == b.exponent && same_child(a.lhs, b.lhs);
    case ExprKind::Compare:
      if (a.op != b.op) return false;
      [[fallthrough]];
    default: return same_child(a.lhs, b.lhs) && same_child(a.rhs, b.rhs);
  }
}

std::string render(const Expr& e) {
  switch (e.kind) {
    case ExprKind::Literal:
      return e.name.empty() ? to_string(e.number) : to_string(e.number) + " " + e.name;
    case ExprKind::Variable: return e.name;
    case ExprKind::Negate: return "-" + wrap_if(precedence(*e.lhs) < 5, *e.lhs);
    case ExprKind::Power:
      return wrap_if(precedence(*e.lhs) < 5, *e.lhs) + "^" + std::to_string(e.exponent);
    default: {
      // Left associative: an equal-precedence right operand needs parentheses.
      const int p = precedence(e);
      return wrap_if(precedence(*e.lhs) < p, *e.lhs) + " " + std::string(symbol(e)) +
             " " + wrap_if(precedence(*e.rhs) <= p, *e.rhs);
    }
  }
}

std::string_view statement_keyword(StatementKind kind) noexcept {
  switch (kind) {
    case StatementKind::Check: return "check";
    case StatementKind::Eval: return "eval";
    case StatementKind::Assert: return "assert";
  }
  return "?";
}

bool structurally_equal(const Program& a, const Program& b) {
  if (a.items.size() != b.items.size()) return false;
  for (std::size_t i = 0; i < a.items.size(); ++i) {
    const auto& x = a.items[i].node;
    const auto& y = b.items[i].node;
    if (x.index() != y.index()) return false;
    const bool same = std::visit(
        [&](const auto& lhs) -> bool {
          using T = std::decay_t<decltype(lhs)>;
          const T& rhs = std::get<T>(y);
          if constexpr (std::is_same_v<T, UnitDecl>) {
            return lhs.name == rhs.name && lhs.dimension == rhs.dimension &&
                   lhs.scale == rhs.scale && lhs.offset == rhs.offset;
          } else if constexpr (std::is_same_v<T, DeriveDecl>) {
            return lhs.name == rhs.name && lhs.factors == rhs.factors;
          } else if constexpr (std::is_same_v<T, ConstDecl>) {
            return lhs.name == rhs.name && lhs.unit == rhs.unit && lhs.value == rhs.value;
          } else if constexpr (std::is_same_v<T, VarDecl>) {
            return lhs.name == rhs.name && lhs.unit == rhs.unit;
          } else if constexpr (std::is_same_v<T, Statement>) {
            return lhs.kind == rhs.kind && structurally_equal(*lhs.expr, *rhs.expr);
          } else {
            return lhs.kind == rhs.kind && lhs.message == rhs.message;
          }
        },
        x);
    if (!same) return false;
  }
  return true;
}

std::string render(const Program& p) {
  std::ostringstream out;
  for (const Item& item : p.items) {
    std::visit(
        [&](const auto& n) {
          using T = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<T, UnitDecl>) {
            out << "unit " << n.name << " : " << to_expression(n.dimension) << " scale "
                << rational_text(n.scale);
            if (!n.offset.is_zero()) out << " offset " << rational_text(n.offset);
            out << "\n";
          } else if constexpr (std::is_same_v<T, DeriveDecl>) {
            out << "derive " << n.name << " =";
            for (std::size_t i = 0; i < n.factors.size(); ++i) {
              if (i > 0) out << (n.factors[i].first ? " *" : " /");
              out << " " << n.factors[i].second;
            }
            out << "\n";
          } else if constexpr (std::is_same_v<T, ConstDecl>) {
            out << "const " << n.name << " : " << n.unit << " = " << to_string(n.value) << "\n";
          } else if constexpr (std::is_same_v<T, VarDecl>) {
            out << "var " << n.name << " : " << n.unit << "\n";
          } else if constexpr (std::is_same_v<T, Statement>) {
            out << statement_keyword(n.kind) << " " << render(*n.expr) << "\n";
          }
        },
        item.node);
  }
  return out.str();
}

}  // namespace dimcheck::quantlang
