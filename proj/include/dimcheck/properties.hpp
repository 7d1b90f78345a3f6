#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "dimcheck/decvalue.hpp"
#include "dimcheck/measure.hpp"

namespace dimcheck {

/// Scale and offset of a built-in unit taken from its statute definition,
/// entered independently of the registry text.
struct ReferenceUnit {
  std::string name;
  Rational scale;
  Rational offset;
};

const std::vector<ReferenceUnit>& reference_units();
const ReferenceUnit* find_reference(std::string_view name);

/// Round-trip tolerance: one ulp at 34 (ctx) digits of the coarsest rounding
/// step, i.e. max(ulp(x), ulp(via) * s_via / s_x) expressed in x's unit.
Rational round_trip_tolerance(const Measurement& x, const Measurement& via,
                              const Rational& via_scale,
                              const PrecisionContext& ctx);

struct PropertyOutcome {
  std::string name;
  std::uint64_t cases = 0;
  std::uint64_t failures = 0;
  std::string first_failure;

  bool ok() const { return failures == 0; }
};

struct SelftestReport {
  std::vector<PropertyOutcome> properties;

  std::uint64_t evaluations() const;
  std::uint64_t failures() const;
  bool ok() const { return failures() == 0; }
};

struct SelftestOptions {
  std::uint64_t iterations = 100000;
  std::uint64_t seed = 0;
  int precision = PrecisionContext::kDefaultDigits;
  /// Worker threads; the report does not depend on it.
  unsigned workers = 1;
  /// Only properties whose name starts with this prefix.
  std::string filter;
};

/// Randomized dimension, measurement and decimal laws, `iterations` cases
/// each. Deterministic per seed.
SelftestReport run_selftest(const UnitRegistry& reg, const SelftestOptions& options);

/// Every ordered pair of equal-dimension units, `values_per_pair` random
/// values each. Two properties per pair: the registry round trip and a mixed
/// round trip returning through the reference definitions (pairs without
/// reference definitions are skipped for the latter).
SelftestReport run_round_trip_suite(const UnitRegistry& reg,
                                    const SelftestOptions& options);

/// One line per property: `PASS name cases` or `FAIL name failures/cases: witness`.
std::string render_report(const SelftestReport& report);

}  // namespace dimcheck
