#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "dimcheck/currency.hpp"

namespace dimcheck::currency {

enum class EventKind { Clock, Rate, Order, Bill, Pay, Serve };

struct Event {
  EventKind kind = EventKind::Clock;
  /// New clock, or the date a rate takes effect.
  Date date = 0;
  /// Rate or bill currency.
  Code code;
  Rational rate{1};
  Name customer;
  Name service;
  BillId bill = 0;
};

/// Scenario line: `clock 3`, `rate 2 EUR 11/10`, `order alice repair`,
/// `bill repair EUR`, `pay 1`, `serve repair`.
std::string to_string(const Event& e);

/// Throws whatever the underlying event throws.
CurrencyState apply(CurrencyState st, const Event& e);

/// A small random engine: USD reference, up to four more currencies, a few
/// customers and providers and 8 to 20 services.
CurrencyState random_engine(std::mt19937_64& gen);

/// A random event whose guard holds in `st`. Clock and rate events are
/// always enabled, so a trace can always continue.
Event random_event(const CurrencyState& st, std::mt19937_64& gen);

struct TraceReport {
  std::uint64_t traces = 0;
  std::uint64_t events = 0;
  std::uint64_t checks = 0;
  std::uint64_t rate_changes_after_payment = 0;
  std::uint64_t failures = 0;
  std::string first_failure;

  bool ok() const { return failures == 0; }
};

/// `traces` random legal traces of `length` events on fresh random engines,
/// checking every invariant after every event. Trace i uses seed
/// (seed, i) so the report is deterministic.
TraceReport run_random_traces(std::uint64_t traces, std::size_t length, std::uint64_t seed);

struct ScenarioStep {
  int line = 0;
  std::string text;
  bool ok = true;
  ErrorKind error_kind = ErrorKind::GuardFailed;
  std::string error;
  std::vector<Violation> violations;
  std::uint64_t digest = 0;
};

struct ScenarioResult {
  std::vector<ScenarioStep> steps;
  CurrencyState final_state;

  std::size_t guard_failures() const;
  std::size_t violations() const;
  bool ok() const { return guard_failures() == 0 && violations() == 0; }
};

/// Runs a scenario file. Setup directives come first:
///   reference <code> | customer <id> <code> | provider <id> |
///   service <id> <provider> <amount> <code> | rate <date> <code> <p/q>
/// The first event line builds the engine; `rate` lines after it are rate
/// changes. `random <n>` appends n random legal events drawn from `seed`.
/// `#` starts a comment. Malformed lines throw ParseError naming the line;
/// engine construction errors propagate. Event guard failures are recorded
/// in the step and leave the state unchanged.
ScenarioResult run_scenario(std::string_view text, std::uint64_t seed = 0);

}  // namespace dimcheck::currency
