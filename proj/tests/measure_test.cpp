#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "dimcheck/error.hpp"
#include "dimcheck/measure.hpp"
#include "support/oracle.hpp"

namespace dimcheck {
namespace {

using testing::long_division_round;

const Dimension kMass = Dimension::base(BaseDimension::Mass);
const Dimension kLength = Dimension::base(BaseDimension::Length);
const Dimension kTime = Dimension::base(BaseDimension::Time);
const Dimension kTemperature = Dimension::base(BaseDimension::Temperature);

class MeasureTest : public ::testing::Test {
 protected:
  Measurement m(std::string_view value, std::string_view unit) const {
    return reg.make(parse_decimal(value), unit);
  }
  const Unit& u(std::string_view name) const { return reg.get(name); }

  UnitRegistry reg = default_registry();
};

TEST(UnitRegistry, StandardHasSevenCanonicalUnits) {
  const UnitRegistry reg = UnitRegistry::standard();
  ASSERT_EQ(reg.units().size(), 7U);
  const std::pair<const char*, BaseDimension> expected[] = {
      {"Kilogram", BaseDimension::Mass},  {"Metre", BaseDimension::Length},
      {"Second", BaseDimension::Time},    {"Kelvin", BaseDimension::Temperature},
      {"Ampere", BaseDimension::Current}, {"Candela", BaseDimension::Light},
      {"Mole", BaseDimension::Matter}};
  for (const auto& [name, base] : expected) {
    const Unit& unit = reg.get(name);
    EXPECT_EQ(unit.dimension, Dimension::base(base)) << name;
    EXPECT_EQ(unit.scale, Rational(1)) << name;
    EXPECT_EQ(unit.offset, Rational(0)) << name;
    EXPECT_TRUE(unit.canonical) << name;
  }
}

TEST(UnitRegistry, RegisterUnit) {
  UnitRegistry reg = UnitRegistry::standard();
  const Unit& ds = reg.register_unit("decisecond", kTime, Rational(1, 10));
  EXPECT_EQ(ds.dimension, kTime);
  EXPECT_FALSE(ds.canonical);
  EXPECT_EQ(reg.register_unit("gram", kMass, Rational(1, 1000)).scale,
            Rational(1, 1000));

  // K = (F + 459.67) * 5/9 rearranged to v -> (5/9) v + 45967/180.
  const Rational f_scale(5, 9);
  const Rational f_offset = Rational::parse("459.67") * f_scale;
  EXPECT_EQ(f_offset, Rational(45967, 180));
  const Unit& f = reg.register_unit("fahrenheit", kTemperature, f_scale, f_offset);
  EXPECT_TRUE(f.is_affine());

  EXPECT_THROW(reg.register_unit("gram", kMass, 1), DuplicateName);
  EXPECT_THROW(reg.register_unit("bad", kMass, 0), InvalidScale);
  EXPECT_THROW(reg.register_unit("worse", kMass, -2), InvalidScale);
  EXPECT_THROW(reg.register_unit("odd", kLength / kTime, 1, 3),
               AffineCompositeRejected);
}

TEST(UnitRegistry, EveryDimensionInUseHasOneCanonicalUnit) {
  UnitRegistry reg = UnitRegistry::standard();
  const Unit& km = reg.register_unit("km", kLength, 1000);
  const Unit& h = reg.register_unit("h", kTime, 3600);
  const Unit km_arr[] = {km};
  const Unit h_arr[] = {h};
  reg.derive_unit("kmh", km_arr, h_arr);
  // kmh is not canonical, so a canonical velocity unit was synthesized first.
  const Unit canonical = reg.canonical_for(kLength / kTime);
  EXPECT_TRUE(canonical.canonical);
  EXPECT_EQ(canonical.name, "Metre/Second");
  EXPECT_TRUE(reg.contains("Metre/Second"));

  std::map<Dimension, int> counts;
  for (const Unit& unit : reg.units())
    if (unit.canonical) ++counts[unit.dimension];
  for (const Unit& unit : reg.units()) EXPECT_EQ(counts[unit.dimension], 1) << unit.name;
}

TEST_F(MeasureTest, DeriveUnit) {
  const Unit kph_num[] = {u("kilometre")};
  const Unit kph_den[] = {u("hour")};
  UnitRegistry local = UnitRegistry::standard();
  local.register_unit("kilometre", kLength, 1000);
  local.register_unit("hour", kTime, 3600);
  const Unit& kph = local.derive_unit("kph", kph_num, kph_den);
  EXPECT_EQ(kph.scale, Rational(1000, 3600));
  EXPECT_EQ(kph.scale, Rational(5, 18));
  EXPECT_EQ(kph.dimension, kLength / kTime);

  // Statute mile 1609.344 m over 3600 s.
  EXPECT_EQ(u("mph").scale, Rational(1609344, 3600000));
  EXPECT_EQ(u("mph").dimension, kLength / kTime);

  EXPECT_EQ(u("mps").scale, Rational(1));
  EXPECT_TRUE(u("mps").canonical);

  const Unit affine[] = {u("celsius")};
  const Unit per_second[] = {u("Second")};
  EXPECT_THROW(local.derive_unit("cps", affine, per_second), AffineCompositeRejected);
}

TEST_F(MeasureTest, Make) {
  const Measurement ten = reg.make(DecValue::make_float(1, 1), "Second");
  EXPECT_EQ(to_string(ten), "10 Second");
  EXPECT_EQ(m("3", "kph").unit.name, "kph");
  EXPECT_TRUE(m("0", "Kelvin").value.is_zero());
  EXPECT_THROW(m("1", "furlong"), UnknownUnit);
}

TEST_F(MeasureTest, ToCanonical) {
  EXPECT_EQ(to_canonical(reg, m("0", "celsius")), m("273.15", "Kelvin"));

  const Measurement v = to_canonical(reg, m("3", "kph"));
  EXPECT_EQ(v.unit.name, "mps");
  EXPECT_EQ(to_rational(v.value),
            Rational::parse(long_division_round(Rational(3 * 5, 18), 34)));
  EXPECT_EQ(to_string(v.value), "0.8333333333333333333333333333333333");

  EXPECT_EQ(to_canonical(reg, m("5", "Kilogram")), m("5", "Kilogram"));
}

TEST_F(MeasureTest, Convert) {
  EXPECT_EQ(to_string(convert(m("2", "pound"), u("gram"))), "907.18474 gram");
  // (32 + 459.67) * 5/9 = 273.15 exactly.
  EXPECT_EQ(convert(m("32", "fahrenheit"), u("Kelvin")), m("273.15", "Kelvin"));
  EXPECT_EQ(convert(m("32", "fahrenheit"), u("celsius")).value, DecValue());
  EXPECT_THROW(convert(m("2", "pound"), u("kelvin")), DimensionMismatch);
  try {
    convert(m("2", "pound"), u("kelvin"));
  } catch (const DimensionMismatch& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("M^1"), std::string::npos) << msg;
    EXPECT_NE(msg.find("Θ^1"), std::string::npos) << msg;
  }
}

TEST_F(MeasureTest, AddAndSubtract) {
  const Measurement sum = add(m("100", "gram"), m("2", "pound"));
  EXPECT_EQ(sum.unit.name, "gram");
  EXPECT_EQ(sum.value, parse_decimal("1007.18474"));
  EXPECT_EQ(to_string(sum), "1007.18474 gram");

  const Measurement x = m("12.5", "mile");
  EXPECT_EQ(add(x, m("0", "mile")), x);
  EXPECT_THROW(add(m("3", "kph"), m("2", "second")), DimensionMismatch);
  EXPECT_THROW(subtract(m("3", "kph"), m("2", "second")), DimensionMismatch);

  EXPECT_EQ(subtract(m("1", "Kilogram"), m("1", "pound")).value,
            parse_decimal("0.54640763"));
}

TEST_F(MeasureTest, MultiplyAndDivide) {
  const Measurement v = divide(reg, m("10", "Metre"), m("2", "Second"));
  EXPECT_EQ(v.unit.name, "mps");
  EXPECT_EQ(v.value, parse_decimal("5"));
  EXPECT_EQ(v.dimension(), kLength / kTime);

  const Measurement speed = divide(reg, m("3", "kilometre"), m("0.5", "hour"));
  EXPECT_EQ(speed.unit.name, "kph");
  EXPECT_EQ(speed.unit.scale, Rational(5, 18));
  EXPECT_EQ(speed.value, parse_decimal("6"));

  const Measurement x = m("7.25", "inch");
  const Measurement ratio = divide(reg, x, x);
  EXPECT_TRUE(ratio.dimension().is_one());
  EXPECT_EQ(ratio.value, parse_decimal("1"));

  const Measurement area = multiply(reg, m("2", "Metre"), m("3", "centimetre"));
  EXPECT_EQ(area.unit.name, "Metre·centimetre");
  EXPECT_EQ(area.unit.scale, Rational(1, 100));
  EXPECT_EQ(area.value, parse_decimal("6"));

  // Affine operands are canonicalized: 0 °C * 2 s = 546.3 K·s.
  const Measurement heat = multiply(reg, m("0", "celsius"), m("2", "Second"));
  EXPECT_EQ(heat.unit.name, "Second·Kelvin");
  EXPECT_TRUE(heat.unit.canonical);
  EXPECT_EQ(heat.value, parse_decimal("546.3"));

  EXPECT_THROW(divide(reg, m("1", "Metre"), m("0", "Second")), DivisionByZero);
  EXPECT_THROW(divide(reg, m("1", "Metre"), m("-273.15", "celsius")), DivisionByZero);
}

TEST_F(MeasureTest, Scale) {
  EXPECT_EQ(scale(parse_decimal("2"), m("3", "Kilogram")), m("6", "Kilogram"));
  const Measurement x = m("-4.5", "hour");
  EXPECT_EQ(scale(parse_decimal("1"), x), x);
  EXPECT_EQ(scale(DecValue(), x), m("0", "hour"));
}

TEST_F(MeasureTest, CompareUsesCanonicalValues) {
  EXPECT_TRUE(compare(CompareOp::Gt, m("5", "minute"), m("200", "second")));
  EXPECT_TRUE(compare(CompareOp::Eq, m("1000", "gram"), m("1", "kilogram")));
  EXPECT_TRUE(compare(CompareOp::Gt, m("10", "second"), m("99", "decisecond")));
  EXPECT_FALSE(compare(CompareOp::Gt, m("10", "second"), m("100", "decisecond")));
  EXPECT_TRUE(compare(CompareOp::Ge, m("10", "second"), m("100", "decisecond")));
  EXPECT_TRUE(compare(CompareOp::Lt, m("-40", "celsius"), m("-39.9", "fahrenheit")));
  EXPECT_TRUE(compare(CompareOp::Eq, m("-40", "celsius"), m("-40", "fahrenheit")));
  EXPECT_TRUE(compare(CompareOp::Ne, m("1", "mph"), m("1", "kph")));
  EXPECT_THROW(compare(CompareOp::Lt, m("3", "kph"), m("2", "second")),
               DimensionMismatch);
}

TEST_F(MeasureTest, RandomMeasurement) {
  const Unit& mile = u("mile");
  EXPECT_EQ(random_measurement(mile, 42), random_measurement(mile, 42));
  int distinct = 0;
  for (std::uint64_t s = 0; s < 10000; ++s) {
    const Measurement a = random_measurement(mile, 2 * s);
    const Measurement b = random_measurement(mile, 2 * s + 1);
    if (a.value != b.value) ++distinct;
  }
  EXPECT_GE(distinct, 9900);
}

TEST_F(MeasureTest, RandomMeasurementShape) {
  for (std::uint64_t s = 0; s < 100000; ++s) {
    const Measurement x = random_measurement(u("gram"), s);
    ASSERT_LE(x.value.digits(), 12U);
    if (x.value.is_zero()) continue;
    ASSERT_GE(x.value.exponent(), -12);
    ASSERT_LE(x.value.exponent(), 12);
    ASSERT_NE(x.value.significand() % 10, 0);
    ASSERT_EQ(x.unit, u("gram"));
  }
}

TEST_F(MeasureTest, RegistryTextRoundTrip) {
  const std::string text = render_registry(reg);
  UnitRegistry again = UnitRegistry::standard();
  load_registry_text(again, text);
  ASSERT_EQ(again.units().size(), reg.units().size());
  for (std::size_t i = 0; i < reg.units().size(); ++i)
    EXPECT_EQ(again.units()[i], reg.units()[i]) << reg.units()[i].name;
}

TEST(RegistryFile, Errors) {
  const auto load = [](std::string_view text) {
    UnitRegistry reg = UnitRegistry::standard();
    load_registry_text(reg, text, "test.units");
    return reg;
  };
  EXPECT_NO_THROW(load("base Kilogram Mass\n# comment\n\nunit g : Mass scale 1/1000\n"));
  EXPECT_THROW(load("base Gram Mass"), RegistryFormat);
  EXPECT_THROW(load("unit x : Speed scale 1"), RegistryFormat);
  EXPECT_THROW(load("unit x : Mass"), RegistryFormat);
  EXPECT_THROW(load("unit x : Mass scale 1 offset"), RegistryFormat);
  EXPECT_THROW(load("unit x : Length/Time scale 1 offset 2"), RegistryFormat);
  EXPECT_THROW(load("derive v = Metre / furlong"), RegistryFormat);
  EXPECT_THROW(load("frobnicate"), RegistryFormat);
  try {
    load("unit g : Mass scale 1/1000\nunit g : Mass scale 1\n");
    FAIL();
  } catch (const RegistryFormat& e) {
    EXPECT_NE(std::string(e.what()).find("test.units:2"), std::string::npos) << e.what();
    EXPECT_NE(std::string(e.what()).find("DuplicateName"), std::string::npos) << e.what();
  }

  const UnitRegistry reg = load("unit lb : Mass scale 0.45359237\nderive v = Metre/Second*Second/Second\n");
  EXPECT_EQ(reg.get("lb").scale, Rational(45359237, 100000000));
  EXPECT_EQ(reg.get("v").dimension, kLength / kTime);
}

// --- properties -----------------------------------------------------------

TEST_F(MeasureTest, AdditionGuardOverAllUnitPairs) {
  const PrecisionContext ctx;
  for (const Unit& a : reg.units()) {
    for (const Unit& b : reg.units()) {
      const Measurement x{parse_decimal("1.5"), a};
      const Measurement y{parse_decimal("2"), b};
      if (a.dimension == b.dimension) {
        EXPECT_NO_THROW(add(x, y, ctx));
        EXPECT_NO_THROW(subtract(x, y, ctx));
        EXPECT_NO_THROW(compare(CompareOp::Lt, x, y, ctx));
      } else {
        EXPECT_THROW(add(x, y, ctx), DimensionMismatch) << a.name << "+" << b.name;
        EXPECT_THROW(subtract(x, y, ctx), DimensionMismatch);
        EXPECT_THROW(compare(CompareOp::Lt, x, y, ctx), DimensionMismatch);
      }
    }
  }
}

TEST_F(MeasureTest, FirstUnitRuleAndProductDimension) {
  std::mt19937_64 gen(21);
  const auto& units = reg.units();
  for (int i = 0; i < 5000; ++i) {
    const Unit& a = units[gen() % units.size()];
    const Unit& b = units[gen() % units.size()];
    const Measurement x = random_measurement(a, gen());
    const Measurement y = random_measurement(b, gen());
    if (a.dimension == b.dimension) ASSERT_EQ(add(x, y).unit, a);
    ASSERT_EQ(multiply(reg, x, y).dimension(), a.dimension * b.dimension);
    if (!y.value.is_zero() && !canonical_value(y).is_zero())
      ASSERT_EQ(divide(reg, x, y).dimension(), a.dimension / b.dimension);
  }
}

TEST_F(MeasureTest, ConversionIsOneRoundingOfTheExactPath) {
  std::mt19937_64 gen(22);
  const auto& units = reg.units();
  for (int i = 0; i < 5000; ++i) {
    const Unit& from = units[gen() % units.size()];
    std::vector<const Unit*> same;
    for (const Unit& t : units)
      if (t.dimension == from.dimension) same.push_back(&t);
    const Unit& to = *same[gen() % same.size()];
    const Measurement x = random_measurement(from, gen());
    const Rational exact =
        (from.scale * to_rational(x.value) + from.offset - to.offset) / to.scale;
    ASSERT_EQ(to_rational(convert(x, to).value),
              Rational::parse(long_division_round(exact, 34)))
        << to_string(x) << " -> " << to.name;
  }
}

// The boolean is invariant whenever both conversions are exact. A rounding
// conversion may move a value by half an ulp of the target unit, so pairs
// closer than that budget are only checked for monotonicity.
TEST_F(MeasureTest, ComparisonInvariantUnderUnitChange) {
  std::mt19937_64 gen(23);
  const auto& units = reg.units();
  const PrecisionContext ctx;
  int exact_cases = 0;
  for (int i = 0; i < 5000; ++i) {
    const Unit& ua = units[gen() % units.size()];
    std::vector<const Unit*> same;
    for (const Unit& t : units)
      if (t.dimension == ua.dimension) same.push_back(&t);
    const Unit& ub = *same[gen() % same.size()];
    const Unit& ua2 = *same[gen() % same.size()];
    const Unit& ub2 = *same[gen() % same.size()];
    const Measurement a = random_measurement(ua, gen());
    // Equal pairs half of the time.
    const Measurement b = (i % 2 == 0) ? convert(a, ub) : random_measurement(ub, gen());
    const Measurement a2 = convert(a, ua2);
    const Measurement b2 = convert(b, ub2);

    const Rational ca = canonical_value(a);
    const Rational cb = canonical_value(b);
    const bool exact = canonical_value(a2) == ca && canonical_value(b2) == cb;
    const Rational budget = to_rational(ulp(a2.value, ctx)) * ua2.scale +
                            to_rational(ulp(b2.value, ctx)) * ub2.scale;
    const Rational gap = ca < cb ? cb - ca : ca - cb;
    if (exact) ++exact_cases;
    for (CompareOp op : {CompareOp::Eq, CompareOp::Ne, CompareOp::Lt, CompareOp::Le,
                         CompareOp::Gt, CompareOp::Ge}) {
      const std::string context = std::string(compare_op_name(op)) + " " +
                                  to_string(a) + " " + to_string(b) + " via " +
                                  ua2.name + ", " + ub2.name;
      if (exact || gap > budget) {
        ASSERT_EQ(compare(op, a, b), compare(op, a2, b2)) << context;
      } else if (ua2 == ub2) {
        // One target unit: conversion is monotone in the exact order.
        if ((op == CompareOp::Le && ca <= cb) || (op == CompareOp::Ge && ca >= cb))
          ASSERT_TRUE(compare(op, a2, b2)) << context;
      }
    }
  }
  EXPECT_GT(exact_cases, 1000);
}

}  // namespace
}  // namespace dimcheck
