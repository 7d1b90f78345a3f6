#include "dimcheck/quantlang/evaluator.hpp"

#include <cstdlib>

namespace dimcheck::quantlang {

namespace {

bool is_scalar(const Measurement& m) {
  return m.dimension().is_one() && m.unit.scale == 1 && !m.unit.is_affine();
}

class Evaluator {
 public:
  Evaluator(const Scope& scope, const std::map<std::string, Measurement>& env,
            const PrecisionContext& ctx)
      : scope_(scope), env_(env), ctx_(ctx) {}

  Value eval(const Expr& e) const {
    if (e.kind == ExprKind::Compare)
      return compare(e.op, quantity(*e.lhs), quantity(*e.rhs), ctx_);
    return quantity(e);
  }

 private:
  Measurement scalar(const DecValue& v) const {
    return Measurement{v, scope_.units.canonical_for(Dimension::one())};
  }

  Measurement quantity(const Expr& e) const {
    switch (e.kind) {
      case ExprKind::Literal:
        if (e.name.empty()) return scalar(e.number);
        return scope_.units.make(e.number, e.name);
      case ExprKind::Variable: return variable(e.name);
      case ExprKind::Negate: return negate(quantity(*e.lhs));
      case ExprKind::Add:
      case ExprKind::Subtract:
        return additive(e.kind == ExprKind::Add, quantity(*e.lhs), quantity(*e.rhs));
      case ExprKind::Multiply: return product(quantity(*e.lhs), quantity(*e.rhs));
      case ExprKind::Divide: return quotient(quantity(*e.lhs), quantity(*e.rhs));
      case ExprKind::Power: return power(quantity(*e.lhs), e.exponent);
      case ExprKind::Compare: break;
    }
    throw DimensionMismatch("a comparison has no quantity value");
  }

  Measurement variable(const std::string& name) const {
    if (const auto it = env_.find(name); it != env_.end()) return it->second;
    const auto it = scope_.names.find(name);
    if (it == scope_.names.end()) throw UnknownName("unknown name '" + name + "'");
    if (!it->second.value) throw UnboundVariable("variable '" + name + "' has no value");
    return scope_.units.make(*it->second.value, it->second.unit);
  }

  Measurement additive(bool add_op, const Measurement& a, const Measurement& b) const {
    if (!a.unit.is_affine() && !b.unit.is_affine())
      return add_op ? add(a, b, ctx_) : subtract(a, b, ctx_);
    if (!same_dimension(a, b))
      throw DimensionMismatch("cannot " + std::string(add_op ? "add" : "subtract") +
                              ": dimension " + to_string(a.dimension()) + " vs " +
                              to_string(b.dimension()));
    // Absolute points: combine in the canonical unit, report in a's unit.
    const Rational ca = canonical_value(a);
    const Rational cb = canonical_value(b);
    const Rational c = add_op ? ca + cb : ca - cb;
    return Measurement{from_rational(a.unit.from_canonical(c), ctx_), a.unit};
  }

  Measurement product(const Measurement& a, const Measurement& b) const {
    if (is_scalar(a) && !b.unit.is_affine()) return scale(a.value, b, ctx_);
    if (is_scalar(b) && !a.unit.is_affine()) return scale(b.value, a, ctx_);
    return multiply(scope_.units, a, b, ctx_);
  }

  Measurement quotient(const Measurement& a, const Measurement& b) const {
    if (is_scalar(b) && !a.unit.is_affine())
      return Measurement{divide(a.value, b.value, ctx_), a.unit};
    return divide(scope_.units, a, b, ctx_);
  }

  Measurement power(const Measurement& base, std::int64_t n) const {
    Measurement acc = scalar(DecValue::from_integer(1));
    for (std::int64_t i = 0; i < std::llabs(n); ++i) acc = product(acc, base);
    if (n >= 0) return acc;
    return quotient(scalar(DecValue::from_integer(1)), acc);
  }

  const Scope& scope_;
  const std::map<std::string, Measurement>& env_;
  PrecisionContext ctx_;
};

}  // namespace

std::string to_string(const Value& v) {
  if (const bool* b = std::get_if<bool>(&v)) return *b ? "true" : "false";
  const Measurement& m = std::get<Measurement>(v);
  if (is_scalar(m)) return to_string(m.value);
  return to_string(m);
}

Value evaluate(const Expr& e, const Scope& scope,
               const std::map<std::string, Measurement>& env,
               const PrecisionContext& ctx) {
  return Evaluator(scope, env, ctx).eval(e);
}

}  // namespace dimcheck::quantlang
