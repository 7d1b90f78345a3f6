#include <gtest/gtest.h>

#include "dimcheck/properties.hpp"
#include "support/fixtures.hpp"

namespace dimcheck {
namespace {

TEST(ReferenceUnits, MatchDefaultRegistry) {
  const UnitRegistry reg = default_registry();
  std::size_t covered = 0;
  for (const Unit& u : reg.units()) {
    const ReferenceUnit* r = find_reference(u.name);
    ASSERT_NE(r, nullptr) << u.name;
    EXPECT_EQ(u.scale, r->scale) << u.name;
    EXPECT_EQ(u.offset, r->offset) << u.name;
    ++covered;
  }
  EXPECT_GE(covered, 12U);
}

TEST(ReferenceUnits, StatuteValues) {
  EXPECT_EQ(find_reference("pound")->scale, Rational::parse("0.45359237"));
  EXPECT_EQ(find_reference("mile")->scale, Rational::parse("1609.344"));
  EXPECT_EQ(find_reference("inch")->scale, Rational::parse("0.0254"));
  EXPECT_EQ(find_reference("fahrenheit")->offset, Rational(45967, 180));
  EXPECT_EQ(find_reference("kph")->scale, Rational(5, 18));
}

TEST(RoundTripTolerance, CoarsestStep) {
  const UnitRegistry reg = default_registry();
  const PrecisionContext ctx;
  const Measurement x = reg.make(parse_decimal("9.5"), "second");
  const Measurement y = convert(x, reg.get("minute"), ctx);
  // ulp(y) = 1e-34 minute = 6e-33 s exceeds ulp(x) = 1e-33 s.
  EXPECT_EQ(round_trip_tolerance(x, y, 60, ctx), Rational::parse("6e-33"));
  const Measurement z = convert(x, reg.get("millisecond"), ctx);
  EXPECT_EQ(round_trip_tolerance(x, z, Rational(1, 1000), ctx), Rational::parse("1e-33"));
}

TEST(Selftest, DefaultRegistryPasses) {
  SelftestOptions options;
  options.iterations = 3000;
  const SelftestReport report = run_selftest(default_registry(), options);
  EXPECT_TRUE(report.ok()) << render_report(report);
  EXPECT_EQ(report.evaluations(), 3000 * report.properties.size());
  EXPECT_GE(report.properties.size(), 10U);
}

TEST(Selftest, DeterministicAcrossWorkers) {
  SelftestOptions options;
  options.iterations = 2500;
  options.seed = 99;
  const UnitRegistry reg = testing::mutated_pound_registry();
  const std::string one = render_report(run_selftest(reg, options));
  options.workers = 4;
  EXPECT_EQ(render_report(run_selftest(reg, options)), one);
  EXPECT_EQ(render_report(run_selftest(reg, options)), one);
}

TEST(Selftest, Filter) {
  SelftestOptions options;
  options.iterations = 10;
  options.filter = "dimension.";
  const SelftestReport report = run_selftest(default_registry(), options);
  ASSERT_EQ(report.properties.size(), 4U);
  for (const auto& p : report.properties) EXPECT_TRUE(p.name.starts_with("dimension."));
}

TEST(Selftest, MutatedPoundFailsRoundTrip) {
  SelftestOptions options;
  options.iterations = 3000;
  const SelftestReport report = run_selftest(testing::mutated_pound_registry(), options);
  EXPECT_FALSE(report.ok());
  for (const auto& p : report.properties) {
    if (p.name == "measure.reference_round_trip") {
      EXPECT_GT(p.failures, 0U);
    } else {
      EXPECT_TRUE(p.ok()) << p.name << ": " << p.first_failure;
    }
  }
}

TEST(RoundTripSuite, EveryPairOfDefaultRegistry) {
  SelftestOptions options;
  options.iterations = 300;
  options.workers = 4;
  const SelftestReport report = run_round_trip_suite(default_registry(), options);
  EXPECT_TRUE(report.ok()) << render_report(report);
  EXPECT_GT(report.properties.size(), 200U);
}

TEST(RoundTripSuite, MutatedPoundFailsOnlyPoundPairs) {
  SelftestOptions options;
  options.iterations = 200;
  const SelftestReport report = run_round_trip_suite(testing::mutated_pound_registry(), options);
  EXPECT_FALSE(report.ok());
  for (const auto& p : report.properties) {
    const bool pound_pair = p.name.find("pound") != std::string::npos &&
                            p.name.starts_with("reference_round_trip") &&
                            p.name != "reference_round_trip pound->pound";
    EXPECT_EQ(p.ok(), !pound_pair) << p.name;
  }
}

}  // namespace
}  // namespace dimcheck
