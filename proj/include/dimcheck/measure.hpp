#pragma once

#include <cstdint>
#include <deque>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "dimcheck/decvalue.hpp"
#include "dimcheck/dimension.hpp"
#include "dimcheck/rational.hpp"

namespace dimcheck {

/// A named scale for one dimension. Values in this unit map to the canonical
/// unit of the dimension by `v -> scale * v + offset`.
struct Unit {
  std::string name;
  Dimension dimension;
  Rational scale{1};
  Rational offset{0};
  bool canonical = false;

  bool is_affine() const { return !offset.is_zero(); }

  Rational to_canonical(const Rational& v) const { return scale * v + offset; }
  Rational from_canonical(const Rational& c) const { return (c - offset) / scale; }

  bool operator==(const Unit&) const = default;
};

/// A value in a unit: the (dimension, value, normalization) triple with the
/// unit supplying the dimension and the normalization.
struct Measurement {
  DecValue value;
  Unit unit;

  const Dimension& dimension() const { return unit.dimension; }

  bool operator==(const Measurement&) const = default;
};

/// `907.18474 gram`
std::string to_string(const Measurement& m);

/// Name → unit table with exactly one canonical unit per dimension in use.
///
/// Conversions are only ever defined between a unit and its canonical unit;
/// any two units of one dimension convert through it. The registry is filled
/// during start-up and then shared read-only.
class UnitRegistry {
 public:
  /// The seven SI canonical units: Kilogram, Metre, Second, Kelvin, Ampere,
  /// Candela, Mole.
  static UnitRegistry standard();

  /// Throws DuplicateName, InvalidScale (scale <= 0) or
  /// AffineCompositeRejected (offset on a non-base dimension).
  const Unit& register_unit(std::string name, const Dimension& dimension,
                            const Rational& scale, const Rational& offset = 0);

  /// Product of `numerator` over product of `denominator`; all constituents
  /// must be linear.
  const Unit& derive_unit(std::string name, std::span<const Unit> numerator,
                          std::span<const Unit> denominator);

  /// Accepts a re-declaration of an existing base canonical unit; anything
  /// else throws RegistryFormat.
  void declare_base(std::string_view name, BaseDimension base);

  const Unit* find(std::string_view name) const;
  /// Throws UnknownUnit.
  const Unit& get(std::string_view name) const;
  bool contains(std::string_view name) const { return find(name) != nullptr; }

  /// The registered canonical unit of `d`, or a synthesized composite of the
  /// base canonical units (`Metre/Second^2`, `1` for dimensionless).
  Unit canonical_for(const Dimension& d) const;

  /// First registered linear unit with this dimension and scale, preferring
  /// the canonical unit.
  const Unit* find_linear(const Dimension& d, const Rational& scale) const;

  /// Throws UnknownUnit.
  Measurement make(const DecValue& value, std::string_view unit) const;

  /// Units in registration order.
  const std::deque<Unit>& units() const { return units_; }

 private:
  const Unit& insert(Unit unit);
  std::string composite_name(const Dimension& d) const;

  std::deque<Unit> units_;
  std::unordered_map<std::string, std::size_t> by_name_;
  std::map<Dimension, std::size_t> canonical_;
};

enum class CompareOp { Eq, Ne, Lt, Le, Gt, Ge };

std::string_view compare_op_name(CompareOp op) noexcept;

bool same_dimension(const Measurement& a, const Measurement& b);

/// Exact value of `m` in the canonical unit of its dimension.
Rational canonical_value(const Measurement& m);

Measurement to_canonical(const UnitRegistry& reg, const Measurement& m,
                         const PrecisionContext& ctx = {});

/// Routes through the canonical unit exactly and rounds once.
/// Throws DimensionMismatch.
Measurement convert(const Measurement& m, const Unit& target,
                    const PrecisionContext& ctx = {});

/// Result is in `a`'s unit: a + convert(b, a.unit), rounded once.
/// Throws DimensionMismatch.
Measurement add(const Measurement& a, const Measurement& b,
                const PrecisionContext& ctx = {});
Measurement subtract(const Measurement& a, const Measurement& b,
                     const PrecisionContext& ctx = {});

/// Linear operands keep a composed unit (`u1·u2`, or a registered unit with
/// the same dimension and scale); affine operands are canonicalized first and
/// give the canonical unit of the product dimension.
Measurement multiply(const UnitRegistry& reg, const Measurement& a,
                     const Measurement& b, const PrecisionContext& ctx = {});
/// Throws DivisionByZero.
Measurement divide(const UnitRegistry& reg, const Measurement& a,
                   const Measurement& b, const PrecisionContext& ctx = {});

Measurement scale(const DecValue& k, const Measurement& m,
                  const PrecisionContext& ctx = {});

Measurement negate(const Measurement& m);

/// Compares canonical values rounded to `ctx`. Throws DimensionMismatch.
bool compare(CompareOp op, const Measurement& a, const Measurement& b,
             const PrecisionContext& ctx = {});

/// Deterministic per seed: up to 12 significand digits, random sign, lead
/// exponent in [-12, 12].
Measurement random_measurement(const Unit& unit, std::uint64_t seed);
DecValue random_value(std::uint64_t seed);

// Registry text format, one declaration per line, `#` comments:
//
//   base <Name> <BaseDimension>
//   unit <name> : <dimension-expr> scale <rational> [offset <rational>]
//   derive <name> = <unit> {('*'|'/') <unit>}

/// Applies declarations to `reg`. Throws RegistryFormat naming
/// `source:line`, or the underlying registry error.
void load_registry(UnitRegistry& reg, std::istream& in,
                   std::string_view source = "<registry>");
void load_registry_text(UnitRegistry& reg, std::string_view text,
                        std::string_view source = "<registry>");

/// Serializes every unit so that loading the text into `standard()` rebuilds
/// an equal registry.
std::string render_registry(const UnitRegistry& reg);

/// Standard units plus the built-in non-SI units (gram, pound, mile, hour,
/// decisecond, celsius, fahrenheit, kph, mph, ...).
UnitRegistry default_registry();
std::string_view default_registry_text();

}  // namespace dimcheck
