#pragma once

#include <map>
#include <string>
#include <variant>

#include "dimcheck/measure.hpp"
#include "dimcheck/quantlang/ast.hpp"
#include "dimcheck/quantlang/checker.hpp"

namespace dimcheck::quantlang {

using Value = std::variant<Measurement, bool>;

/// `1007.18474 gram`, `true`.
std::string to_string(const Value& v);

/// Evaluates a checked expression. Variables are looked up in `env`, then
/// among the constants of `scope`.
///
/// Bare numbers are dimensionless scalars: multiplying or dividing a quantity
/// by one keeps the quantity's unit. Adding or subtracting affine quantities
/// is done on absolute values in the canonical unit and reported in the first
/// operand's unit. Throws UnboundVariable, DivisionByZero, or the measure
/// errors.
Value evaluate(const Expr& e, const Scope& scope,
               const std::map<std::string, Measurement>& env,
               const PrecisionContext& ctx = {});

}  // namespace dimcheck::quantlang
