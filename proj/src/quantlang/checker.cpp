#include "dimcheck/quantlang/checker.hpp"

#include <sstream>

#include "dimcheck/quantlang/evaluator.hpp"

namespace dimcheck::quantlang {

namespace {

[[noreturn]] void raise(const SourcePos& pos, ErrorKind kind, std::string message) {
  throw Diagnostic{pos, kind, std::move(message), std::nullopt, std::nullopt};
}

std::string_view operation_name(ExprKind kind) {
  switch (kind) {
    case ExprKind::Add: return "add";
    case ExprKind::Subtract: return "subtract";
    case ExprKind::Compare: return "compare";
    default: return "combine";
  }
}

ValueType quantity(Dimension d) { return ValueType{false, d}; }

const Unit& lookup_unit(const Scope& scope, const std::string& name, const SourcePos& pos) {
  if (const Unit* u = scope.units.find(name)) return *u;
  raise(pos, ErrorKind::UnknownUnit, "unknown unit '" + name + "'");
}

}  // namespace

std::string to_string(const ValueType& t) {
  return t.boolean ? "boolean" : to_string(t.dimension);
}

ValueType infer_located(const Expr& e, const Scope& scope) {
  switch (e.kind) {
    case ExprKind::Literal:
      if (e.name.empty()) return quantity(Dimension::one());
      return quantity(lookup_unit(scope, e.name, e.pos).dimension);
    case ExprKind::Variable: {
      const auto it = scope.names.find(e.name);
      if (it == scope.names.end())
        raise(e.pos, ErrorKind::UnknownName, "unknown name '" + e.name + "'");
      return quantity(lookup_unit(scope, it->second.unit, e.pos).dimension);
    }
    case ExprKind::Negate: return infer_located(*e.lhs, scope);
    case ExprKind::Power:
      return quantity(infer_located(*e.lhs, scope).dimension.pow(e.exponent));
    case ExprKind::Multiply:
    case ExprKind::Divide: {
      const Dimension a = infer_located(*e.lhs, scope).dimension;
      const Dimension b = infer_located(*e.rhs, scope).dimension;
      return quantity(e.kind == ExprKind::Multiply ? a * b : a / b);
    }
    case ExprKind::Add:
    case ExprKind::Subtract:
    case ExprKind::Compare: {
      const Dimension a = infer_located(*e.lhs, scope).dimension;
      const Dimension b = infer_located(*e.rhs, scope).dimension;
      if (a != b) {
        throw Diagnostic{e.pos, ErrorKind::DimensionMismatch,
                         "cannot " + std::string(operation_name(e.kind)) + ": dimension " +
                             to_string(a) + " vs " + to_string(b),
                         a, b};
      }
      return ValueType{e.kind == ExprKind::Compare, a};
    }
  }
  raise(e.pos, ErrorKind::ParseError, "unknown expression");
}

ValueType infer_dimension(const Expr& e, const Scope& scope) {
  try {
    return infer_located(e, scope);
  } catch (const Diagnostic& d) {
    switch (d.kind) {
      case ErrorKind::DimensionMismatch: throw DimensionMismatch(d.message);
      case ErrorKind::UnknownName: throw UnknownName(d.message);
      default: throw UnknownUnit(d.message);
    }
  }
}

std::size_t CheckReport::error_count() const {
  std::size_t n = 0;
  for (const Verdict& v : verdicts)
    if (!v.ok) ++n;
  return n;
}

namespace {

Verdict failure(const SourcePos& pos, std::string subject, Diagnostic d) {
  Verdict v;
  v.pos = pos;
  v.subject = std::move(subject);
  v.ok = false;
  v.error = std::move(d);
  return v;
}

Diagnostic from_error(const SourcePos& pos, const Error& e) {
  return Diagnostic{pos, e.kind(), e.what(), std::nullopt, std::nullopt};
}

class Walker {
 public:
  Walker(const UnitRegistry& reg, const std::map<std::string, DecValue>* values,
         const PrecisionContext& ctx)
      : values_(values), ctx_(ctx) {
    scope_.units = reg;
  }

  CheckReport run(const Program& p) {
    for (const Item& item : p.items) {
      std::visit([&](const auto& n) { visit(item.pos, n); }, item.node);
    }
    return std::move(report_);
  }

 private:
  void declare_name(const SourcePos& pos, std::string_view keyword,
                    const std::string& name, const std::string& unit,
                    std::optional<DecValue> value) {
    if (scope_.names.contains(name)) {
      report_.verdicts.push_back(failure(
          pos, std::string(keyword),
          {pos, ErrorKind::Redeclaration, "'" + name + "' is already declared", {}, {}}));
      return;
    }
    if (!scope_.units.contains(unit)) {
      report_.verdicts.push_back(failure(
          pos, std::string(keyword),
          {pos, ErrorKind::UnknownUnit, "unknown unit '" + unit + "'", {}, {}}));
      return;
    }
    scope_.names.emplace(name, Binding{unit, std::move(value)});
  }

  void visit(const SourcePos& pos, const UnitDecl& d) {
    try {
      scope_.units.register_unit(d.name, d.dimension, d.scale, d.offset);
    } catch (const Error& e) {
      report_.verdicts.push_back(failure(pos, "unit", from_error(pos, e)));
    }
  }

  void visit(const SourcePos& pos, const DeriveDecl& d) {
    try {
      std::vector<Unit> num;
      std::vector<Unit> den;
      for (const auto& [mul, name] : d.factors) (mul ? num : den).push_back(scope_.units.get(name));
      scope_.units.derive_unit(d.name, num, den);
    } catch (const Error& e) {
      report_.verdicts.push_back(failure(pos, "derive", from_error(pos, e)));
    }
  }

  void visit(const SourcePos& pos, const ConstDecl& d) {
    declare_name(pos, "const", d.name, d.unit, d.value);
  }

  void visit(const SourcePos& pos, const VarDecl& d) {
    declare_name(pos, "var", d.name, d.unit, std::nullopt);
  }

  void visit(const SourcePos& pos, const Malformed& m) {
    report_.verdicts.push_back(failure(pos, "syntax", {pos, m.kind, m.message, {}, {}}));
  }

  void visit(const SourcePos& pos, const Statement& s) {
    const std::string subject(statement_keyword(s.kind));
    Verdict v;
    v.pos = pos;
    v.subject = subject;
    try {
      v.type = infer_located(*s.expr, scope_);
    } catch (const Diagnostic& d) {
      report_.verdicts.push_back(failure(d.pos, subject, d));
      return;
    }
    if (s.kind == StatementKind::Assert && !v.type.boolean) {
      report_.verdicts.push_back(failure(
          pos, subject,
          {pos, ErrorKind::ParseError, "assert needs a comparison, got " + to_string(v.type), {}, {}}));
      return;
    }
    if (values_ != nullptr) {
      try {
        const Value result = evaluate(*s.expr, scope_, bound(), ctx_);
        v.value = to_string(result);
        if (s.kind == StatementKind::Assert && !std::get<bool>(result)) {
          report_.verdicts.push_back(failure(
              pos, subject,
              {pos, ErrorKind::AssertionFailed, "assertion is false: " + render(*s.expr), {}, {}}));
          return;
        }
      } catch (const Error& e) {
        // A check only needs its type, so unbound variables are fine there.
        if (s.kind != StatementKind::Check || e.kind() != ErrorKind::UnboundVariable) {
          report_.verdicts.push_back(failure(pos, subject, from_error(pos, e)));
          return;
        }
      }
    }
    report_.verdicts.push_back(std::move(v));
  }

  std::map<std::string, Measurement> bound() const {
    std::map<std::string, Measurement> env;
    for (const auto& [name, value] : *values_) {
      const auto it = scope_.names.find(name);
      if (it == scope_.names.end() || it->second.value) continue;
      env.emplace(name, Measurement{value, scope_.units.get(it->second.unit)});
    }
    return env;
  }

  Scope scope_;
  CheckReport report_;
  const std::map<std::string, DecValue>* values_;
  PrecisionContext ctx_;
};

}  // namespace

CheckReport check_program(const Program& p, const UnitRegistry& reg) {
  return Walker(reg, nullptr, PrecisionContext()).run(p);
}

CheckReport run_program(const Program& p, const UnitRegistry& reg,
                        const std::map<std::string, DecValue>& values,
                        const PrecisionContext& ctx) {
  return Walker(reg, &values, ctx).run(p);
}

std::string format_plain(const Verdict& v, std::string_view file) {
  std::ostringstream out;
  out << file << ":" << v.pos.line << ":" << v.pos.column << ": ";
  if (!v.ok) {
    out << kind_name(v.error.kind) << ": " << v.error.message;
  } else {
    out << "OK: " << v.subject << " " << to_string(v.type);
    if (!v.value.empty()) out << " = " << v.value;
  }
  return out.str();
}

std::string format_machine(const Verdict& v, std::string_view file) {
  std::ostringstream out;
  out << file << "\t" << v.pos.line << "\t" << v.pos.column << "\t" << v.subject << "\t";
  if (!v.ok) {
    out << "ERROR\t" << kind_name(v.error.kind) << "\t" << v.error.message;
  } else {
    out << "OK\t" << to_string(v.type) << "\t" << (v.value.empty() ? "-" : v.value);
  }
  return out.str();
}

}  // namespace dimcheck::quantlang
