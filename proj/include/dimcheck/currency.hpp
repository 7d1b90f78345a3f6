#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "dimcheck/decvalue.hpp"
#include "dimcheck/error.hpp"
#include "dimcheck/rational.hpp"

namespace dimcheck::currency {

using Code = std::string;
using Date = std::int64_t;
using BillId = std::uint64_t;

struct Money {
  DecValue amount;
  Code code;

  friend bool operator==(const Money&, const Money&) = default;
};

/// "110 USD".
std::string to_string(const Money& m);

/// Throws CurrencyMismatch unless both operands carry the same code.
Money add(const Money& a, const Money& b, const PrecisionContext& ctx = {});
Money subtract(const Money& a, const Money& b, const PrecisionContext& ctx = {});

/// Value of one unit of each currency in the reference currency, as a step
/// function of the date: a query sees the latest rate set at or before it.
class RateTable {
 public:
  explicit RateTable(Code reference = "USD");

  const Code& reference() const noexcept { return reference_; }
  bool knows(const Code& code) const { return rates_.contains(code); }
  /// Sorted.
  std::vector<Code> codes() const;

  /// Throws InvalidRate for a non-positive rate, a negative date or a
  /// reference rate other than 1.
  void set(Date date, const Code& code, const Rational& rate);

  /// Throws InvalidRate when the code has no rate at or before `date`.
  const Rational& rate(Date date, const Code& code) const;
  /// Factor taking an amount in `from` to an amount in `to`.
  Rational conversion(Date date, const Code& from, const Code& to) const;

  const std::map<Code, std::map<Date, Rational>>& schedule() const noexcept {
    return rates_;
  }

 private:
  Code reference_;
  std::map<Code, std::map<Date, Rational>> rates_;
};

/// A conversion recorded at payment time: the exact factor and the codes it
/// maps between.
struct Conversion {
  Rational rate;
  Code source;
  Code target;

  /// Rounds once at the context precision. Throws CurrencyMismatch when `m`
  /// is not in the source currency.
  Money apply(const Money& m, const PrecisionContext& ctx = {}) const;

  friend bool operator==(const Conversion&, const Conversion&) = default;
};

using Name = std::string;

/// Bill fields gathered from the state maps.
struct Bill {
  BillId id = 0;
  Money val;
  Name cust;
  Name prov;
  Name ser;
  std::optional<Date> date;
  std::optional<Conversion> t;
  std::optional<Money> npay;
};

/// Settlement state. Relations over services are partial functions
/// service -> customer; bill attributes are partial functions over bill ids.
/// Fields are public so tests can build states that events never reach.
struct CurrencyState {
  std::map<Name, Code> customers;
  std::set<Name> providers;
  std::set<Name> services;
  std::map<Name, Name> provider_of;

  std::map<Name, Name> order;
  std::map<Name, Name> billing;
  std::map<Name, Name> pay;
  std::map<Name, Name> deliver;

  std::set<BillId> bills;
  std::map<BillId, Money> val;
  std::map<BillId, Name> cust;
  std::map<BillId, Name> prov;
  std::map<BillId, Name> ser;
  std::map<BillId, Date> date;
  std::map<BillId, Conversion> t;
  std::map<BillId, Money> npay;

  std::map<Name, Money> tariff;
  std::map<std::pair<Name, Name>, Money> cpay;

  Date clock = 0;
  RateTable rates;
  BillId next_bill = 1;
  PrecisionContext ctx;
};

/// Throws IncompleteTariff when a service has no tariff, GuardFailed when a
/// service has no known provider or a name is unknown, and InvalidRate when
/// a customer or tariff currency has no rate at date 0.
CurrencyState engine_new(std::map<Name, Code> customers, std::set<Name> providers,
                         std::set<Name> services, std::map<Name, Name> service_provider,
                         std::map<Name, Money> tariff, RateTable rates,
                         const PrecisionContext& ctx = {});

/// Each event throws GuardFailed when its guard does not hold.
CurrencyState event_order(CurrencyState st, const Name& customer, const Name& service);
std::pair<CurrencyState, Bill> event_bill(CurrencyState st, const Name& service,
                                          const Code& bill_currency);
CurrencyState event_pay(CurrencyState st, BillId bill);
CurrencyState event_serve(CurrencyState st, const Name& service);

/// Throws ClockRegression.
CurrencyState advance_clock(CurrencyState st, Date new_date);
/// Throws InvalidRate, also for codes the engine was not built with.
CurrencyState set_rate(CurrencyState st, Date date, const Code& code, const Rational& rate);

/// Throws GuardFailed for an unknown id.
Bill bill(const CurrencyState& st, BillId id);

struct Violation {
  std::string invariant;
  std::string witness;
};

/// Empty iff every implemented invariant holds. Names follow the models:
/// inv3..inv5 for the service relations, M000.inv3..M000.inv5 for the bill
/// typing, inv10..inv24 for the bill bookkeeping.
std::vector<Violation> check_invariants(const CurrencyState& st);

/// Canonical text of the whole state; equal states give equal text.
std::string serialize(const CurrencyState& st);
/// FNV-1a 64 of serialize().
std::uint64_t digest(const CurrencyState& st);

}  // namespace dimcheck::currency
