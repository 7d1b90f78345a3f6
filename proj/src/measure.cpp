#include "dimcheck/measure.hpp"

#include <random>

#include "dimcheck/error.hpp"

namespace dimcheck {

namespace {

std::string mismatch_message(std::string_view what, const Dimension& a,
                             const Dimension& b) {
  return std::string(what) + ": dimension " + to_string(a) + " vs " +
         to_string(b);
}

void require_same_dimension(std::string_view what, const Measurement& a,
                            const Measurement& b) {
  if (!same_dimension(a, b))
    throw DimensionMismatch(mismatch_message(what, a.dimension(), b.dimension()));
}

bool same_scale(const Unit& a, const Unit& b) {
  return a.scale == b.scale && a.offset == b.offset;
}

std::string wrap(const std::string& name, bool compound) {
  return compound ? "(" + name + ")" : name;
}

bool has_any(const std::string& s, std::string_view chars) {
  return s.find_first_of(chars) != std::string::npos;
}

Unit composed_unit(const UnitRegistry& reg, const Unit& a, const Unit& b,
                   bool product) {
  const Dimension dim = product ? a.dimension * b.dimension
                                : a.dimension / b.dimension;
  const Rational s = product ? a.scale * b.scale : a.scale / b.scale;
  if (const Unit* named = reg.find_linear(dim, s)) return *named;
  Unit u;
  u.name = product ? wrap(a.name, has_any(a.name, "/")) + "·" +
                         wrap(b.name, has_any(b.name, "/"))
                   : a.name + "/" + wrap(b.name, has_any(b.name, "/·"));
  u.dimension = dim;
  u.scale = s;
  return u;
}

}  // namespace

std::string to_string(const Measurement& m) {
  return to_string(m.value) + " " + m.unit.name;
}

UnitRegistry UnitRegistry::standard() {
  UnitRegistry reg;
  const std::pair<const char*, BaseDimension> bases[] = {
      {"Kilogram", BaseDimension::Mass},     {"Metre", BaseDimension::Length},
      {"Second", BaseDimension::Time},       {"Kelvin", BaseDimension::Temperature},
      {"Ampere", BaseDimension::Current},    {"Candela", BaseDimension::Light},
      {"Mole", BaseDimension::Matter},
  };
  for (const auto& [name, base] : bases)
    reg.register_unit(name, Dimension::base(base), 1);
  return reg;
}

const Unit& UnitRegistry::insert(Unit unit) {
  if (contains(unit.name))
    throw DuplicateName("unit '" + unit.name + "' is already registered");
  const std::size_t index = units_.size();
  by_name_.emplace(unit.name, index);
  if (unit.canonical) canonical_.emplace(unit.dimension, index);
  units_.push_back(std::move(unit));
  return units_.back();
}

const Unit& UnitRegistry::register_unit(std::string name,
                                        const Dimension& dimension,
                                        const Rational& scale,
                                        const Rational& offset) {
  if (contains(name))
    throw DuplicateName("unit '" + name + "' is already registered");
  if (scale.sign() <= 0)
    throw InvalidScale("unit '" + name + "' needs a positive scale, got " +
                       scale.to_string());
  if (!offset.is_zero() && !dimension.single_base())
    throw AffineCompositeRejected("unit '" + name +
                                  "': an offset is only allowed on a base "
                                  "dimension, not " + to_string(dimension));

  Unit unit{std::move(name), dimension, scale, offset, false};
  if (!canonical_.contains(dimension)) {
    if (scale == 1 && offset.is_zero()) {
      unit.canonical = true;
    } else {
      insert(canonical_for(dimension));
    }
  }
  return insert(std::move(unit));
}

const Unit& UnitRegistry::derive_unit(std::string name,
                                      std::span<const Unit> numerator,
                                      std::span<const Unit> denominator) {
  Dimension dim;
  Rational s = 1;
  const auto fold = [&](const Unit& u, bool up) {
    if (u.is_affine())
      throw AffineCompositeRejected("unit '" + u.name +
                                    "' has an offset and cannot be composed");
    dim = up ? dim * u.dimension : dim / u.dimension;
    s = up ? s * u.scale : s / u.scale;
  };
  for (const Unit& u : numerator) fold(u, true);
  for (const Unit& u : denominator) fold(u, false);
  return register_unit(std::move(name), dim, s);
}

void UnitRegistry::declare_base(std::string_view name, BaseDimension base) {
  const Unit current = canonical_for(Dimension::base(base));
  if (current.name != name)
    throw RegistryFormat("canonical unit of " + std::string(base_name(base)) +
                         " is " + current.name + ", not " + std::string(name));
}

const Unit* UnitRegistry::find(std::string_view name) const {
  const auto it = by_name_.find(std::string(name));
  return it == by_name_.end() ? nullptr : &units_[it->second];
}

const Unit& UnitRegistry::get(std::string_view name) const {
  if (const Unit* u = find(name)) return *u;
  throw UnknownUnit("unknown unit '" + std::string(name) + "'");
}

std::string UnitRegistry::composite_name(const Dimension& d) const {
  std::string num;
  std::string den;
  for (BaseDimension b : kBaseDimensions) {
    const auto e = d[b];
    if (e == 0) continue;
    const auto it = canonical_.find(Dimension::base(b));
    std::string term = it != canonical_.end() ? units_[it->second].name
                                              : std::string(base_symbol(b));
    const auto mag = e > 0 ? e : -e;
    if (mag != 1) term += "^" + std::to_string(mag);
    std::string& side = e > 0 ? num : den;
    side += (side.empty() ? "" : "·") + term;
  }
  if (num.empty()) num = "1";
  return den.empty() ? num : num + "/" + den;
}

Unit UnitRegistry::canonical_for(const Dimension& d) const {
  if (const auto it = canonical_.find(d); it != canonical_.end())
    return units_[it->second];
  return Unit{composite_name(d), d, 1, 0, true};
}

const Unit* UnitRegistry::find_linear(const Dimension& d,
                                      const Rational& s) const {
  if (s == 1)
    if (const auto it = canonical_.find(d); it != canonical_.end())
      return &units_[it->second];
  for (const Unit& u : units_)
    if (u.dimension == d && !u.is_affine() && u.scale == s) return &u;
  return nullptr;
}

Measurement UnitRegistry::make(const DecValue& value,
                               std::string_view unit) const {
  return Measurement{value, get(unit)};
}

std::string_view compare_op_name(CompareOp op) noexcept {
  switch (op) {
    case CompareOp::Eq: return "eq";
    case CompareOp::Ne: return "neq";
    case CompareOp::Lt: return "lt";
    case CompareOp::Le: return "le";
    case CompareOp::Gt: return "gt";
    case CompareOp::Ge: return "ge";
  }
  return "?";
}

bool same_dimension(const Measurement& a, const Measurement& b) {
  return a.dimension() == b.dimension();
}

Rational canonical_value(const Measurement& m) {
  return m.unit.to_canonical(to_rational(m.value));
}

Measurement to_canonical(const UnitRegistry& reg, const Measurement& m,
                         const PrecisionContext& ctx) {
  Unit target = reg.canonical_for(m.dimension());
  if (same_scale(m.unit, target)) return Measurement{round(m.value, ctx), std::move(target)};
  return Measurement{from_rational(canonical_value(m), ctx), std::move(target)};
}

Measurement convert(const Measurement& m, const Unit& target,
                    const PrecisionContext& ctx) {
  if (m.dimension() != target.dimension)
    throw DimensionMismatch(mismatch_message(
        "cannot convert to " + target.name, m.dimension(), target.dimension));
  if (same_scale(m.unit, target)) return Measurement{round(m.value, ctx), target};
  return Measurement{
      from_rational(target.from_canonical(canonical_value(m)), ctx), target};
}

Measurement add(const Measurement& a, const Measurement& b,
                const PrecisionContext& ctx) {
  require_same_dimension("cannot add", a, b);
  if (same_scale(a.unit, b.unit))
    return Measurement{add(a.value, b.value, ctx), a.unit};
  const Rational b_in_a = a.unit.from_canonical(canonical_value(b));
  return Measurement{from_rational(to_rational(a.value) + b_in_a, ctx), a.unit};
}

Measurement subtract(const Measurement& a, const Measurement& b,
                     const PrecisionContext& ctx) {
  require_same_dimension("cannot subtract", a, b);
  if (same_scale(a.unit, b.unit))
    return Measurement{subtract(a.value, b.value, ctx), a.unit};
  const Rational b_in_a = a.unit.from_canonical(canonical_value(b));
  return Measurement{from_rational(to_rational(a.value) - b_in_a, ctx), a.unit};
}

Measurement multiply(const UnitRegistry& reg, const Measurement& a,
                     const Measurement& b, const PrecisionContext& ctx) {
  if (!a.unit.is_affine() && !b.unit.is_affine())
    return Measurement{multiply(a.value, b.value, ctx),
                       composed_unit(reg, a.unit, b.unit, true)};
  return Measurement{
      from_rational(canonical_value(a) * canonical_value(b), ctx),
      reg.canonical_for(a.dimension() * b.dimension())};
}

Measurement divide(const UnitRegistry& reg, const Measurement& a,
                   const Measurement& b, const PrecisionContext& ctx) {
  if (!a.unit.is_affine() && !b.unit.is_affine()) {
    if (b.value.is_zero()) throw DivisionByZero("division by a zero measurement");
    return Measurement{divide(a.value, b.value, ctx),
                       composed_unit(reg, a.unit, b.unit, false)};
  }
  const Rational divisor = canonical_value(b);
  if (divisor.is_zero()) throw DivisionByZero("division by a zero measurement");
  return Measurement{from_rational(canonical_value(a) / divisor, ctx),
                     reg.canonical_for(a.dimension() / b.dimension())};
}

Measurement scale(const DecValue& k, const Measurement& m,
                  const PrecisionContext& ctx) {
  return Measurement{multiply(k, m.value, ctx), m.unit};
}

Measurement negate(const Measurement& m) {
  return Measurement{negate(m.value), m.unit};
}

bool compare(CompareOp op, const Measurement& a, const Measurement& b,
             const PrecisionContext& ctx) {
  require_same_dimension(
      "cannot compare (" + std::string(compare_op_name(op)) + ")", a, b);
  const auto lhs = from_rational(canonical_value(a), ctx);
  const auto rhs = from_rational(canonical_value(b), ctx);
  const auto c = compare(lhs, rhs);
  switch (op) {
    case CompareOp::Eq: return c == 0;
    case CompareOp::Ne: return c != 0;
    case CompareOp::Lt: return c < 0;
    case CompareOp::Le: return c <= 0;
    case CompareOp::Gt: return c > 0;
    case CompareOp::Ge: return c >= 0;
  }
  return false;
}

DecValue random_value(std::uint64_t seed) {
  // Raw engine output only; library distributions differ between vendors.
  std::mt19937_64 gen(seed);
  constexpr std::uint64_t kSignificandRange = 1'000'000'000'000ULL;
  const std::uint64_t magnitude = gen() % kSignificandRange;
  const bool negative = (gen() & 1U) != 0;
  const auto exponent = static_cast<std::int64_t>(gen() % 25) - 12;
  BigInt sig = magnitude;
  if (negative) sig = -sig;
  return DecValue::make_float(std::move(sig), exponent);
}

Measurement random_measurement(const Unit& unit, std::uint64_t seed) {
  return Measurement{random_value(seed), unit};
}

}  // namespace dimcheck
