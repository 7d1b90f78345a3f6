#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "dimcheck/currency.hpp"
#include "dimcheck/currency_scenario.hpp"

using namespace dimcheck;
using namespace dimcheck::currency;

namespace {

Money money(const char* amount, const char* code) { return Money{parse_decimal(amount), code}; }

// One USD customer, one EUR customer, EUR at 1.1 USD, two services priced in
// EUR and USD.
CurrencyState shop() {
  RateTable rates("USD");
  rates.set(0, "EUR", Rational(11, 10));
  return engine_new({{"alice", "USD"}, {"bruno", "EUR"}}, {"acme"}, {"repair", "paint"},
                    {{"repair", "acme"}, {"paint", "acme"}},
                    {{"repair", money("100", "EUR")}, {"paint", money("40", "USD")}},
                    std::move(rates));
}

bool has(const std::vector<Violation>& v, const std::string& name, const std::string& witness = "") {
  for (const Violation& x : v)
    if (x.invariant == name && x.witness.find(witness) != std::string::npos) return true;
  return false;
}

// Rate of `code` at `d` read straight off the schedule.
Rational scheduled_rate(const RateTable& rates, Date d, const Code& code) {
  Rational r;
  bool found = false;
  for (const auto& [when, value] : rates.schedule().at(code))
    if (when <= d) {
      r = value;
      found = true;
    }
  EXPECT_TRUE(found);
  return r;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST(MoneyTest, AddRequiresSameCode) {
  EXPECT_EQ(add(money("1.5", "EUR"), money("2.25", "EUR")), money("3.75", "EUR"));
  EXPECT_EQ(subtract(money("1.5", "EUR"), money("2.25", "EUR")), money("-0.75", "EUR"));
  EXPECT_THROW(add(money("1", "EUR"), money("1", "USD")), CurrencyMismatch);
  EXPECT_THROW(subtract(money("1", "EUR"), money("1", "USD")), CurrencyMismatch);
  EXPECT_EQ(to_string(money("110", "USD")), "110 USD");
}

TEST(RateTableTest, StepFunction) {
  RateTable r("USD");
  r.set(0, "EUR", Rational(11, 10));
  r.set(5, "EUR", Rational(6, 5));
  EXPECT_EQ(r.rate(0, "EUR"), Rational(11, 10));
  EXPECT_EQ(r.rate(4, "EUR"), Rational(11, 10));
  EXPECT_EQ(r.rate(5, "EUR"), Rational(6, 5));
  EXPECT_EQ(r.rate(100, "EUR"), Rational(6, 5));
  EXPECT_EQ(r.rate(3, "USD"), Rational(1));
  EXPECT_EQ(r.conversion(0, "EUR", "USD"), Rational(11, 10));
  EXPECT_EQ(r.conversion(0, "USD", "EUR"), Rational(10, 11));
  EXPECT_EQ(r.codes(), (std::vector<Code>{"EUR", "USD"}));
}

TEST(RateTableTest, Errors) {
  RateTable r("USD");
  EXPECT_THROW(r.set(0, "EUR", Rational(0)), InvalidRate);
  EXPECT_THROW(r.set(0, "EUR", Rational(-1)), InvalidRate);
  EXPECT_THROW(r.set(-1, "EUR", Rational(1)), InvalidRate);
  EXPECT_THROW(r.set(0, "USD", Rational(2)), InvalidRate);
  r.set(3, "GBP", Rational(5, 4));
  EXPECT_THROW(r.rate(2, "GBP"), InvalidRate);
  EXPECT_THROW(r.rate(0, "JPY"), InvalidRate);
}

TEST(EngineTest, Construction) {
  const CurrencyState empty = engine_new({}, {}, {}, {}, {}, RateTable("USD"));
  EXPECT_TRUE(check_invariants(empty).empty());
  EXPECT_EQ(empty.clock, 0);

  EXPECT_THROW(engine_new({}, {"acme"}, {"repair"}, {}, {{"repair", money("1", "USD")}},
                          RateTable("USD")),
               GuardFailed);
  EXPECT_THROW(engine_new({}, {"acme"}, {"repair"}, {{"repair", "other"}},
                          {{"repair", money("1", "USD")}}, RateTable("USD")),
               GuardFailed);
  EXPECT_THROW(engine_new({}, {"acme"}, {"repair", "paint"},
                          {{"repair", "acme"}, {"paint", "acme"}},
                          {{"repair", money("1", "USD")}}, RateTable("USD")),
               IncompleteTariff);
  EXPECT_THROW(engine_new({{"alice", "EUR"}}, {}, {}, {}, {}, RateTable("USD")), InvalidRate);

  RateTable late("USD");
  late.set(2, "EUR", Rational(1));
  EXPECT_THROW(engine_new({}, {}, {}, {}, {}, late), InvalidRate);
}

TEST(EventTest, Order) {
  CurrencyState st = event_order(shop(), "alice", "repair");
  EXPECT_EQ(st.order.at("repair"), "alice");
  EXPECT_THROW(event_order(st, "alice", "repair"), GuardFailed);
  EXPECT_THROW(event_order(st, "bruno", "repair"), GuardFailed);
  EXPECT_THROW(event_order(st, "zoe", "paint"), GuardFailed);
  EXPECT_THROW(event_order(st, "alice", "wash"), GuardFailed);
}

TEST(EventTest, Bill) {
  CurrencyState st = event_order(shop(), "alice", "repair");
  auto [billed, b] = event_bill(st, "repair", "EUR");
  EXPECT_EQ(b.id, 1u);
  EXPECT_EQ(b.val, money("100", "EUR"));
  EXPECT_EQ(b.cust, "alice");
  EXPECT_EQ(b.prov, "acme");
  EXPECT_EQ(b.ser, "repair");
  EXPECT_FALSE(b.date || b.t || b.npay);
  EXPECT_EQ(billed.billing.at("repair"), "alice");
  EXPECT_TRUE(check_invariants(billed).empty());

  EXPECT_THROW(event_bill(billed, "repair", "EUR"), GuardFailed);
  EXPECT_THROW(event_bill(billed, "paint", "USD"), GuardFailed);
  EXPECT_THROW(event_bill(event_order(billed, "bruno", "paint"), "paint", "JPY"), GuardFailed);
}

TEST(EventTest, BillConvertsTariffAtClock) {
  CurrencyState st = set_rate(advance_clock(event_order(shop(), "alice", "repair"), 4), 4, "EUR",
                              Rational(6, 5));
  const Bill b = event_bill(st, "repair", "USD").second;
  // 100 EUR at 6/5 USD per EUR.
  EXPECT_EQ(b.val, money("120", "USD"));
}

TEST(EventTest, PaySnapshotsConversion) {
  CurrencyState st = event_order(shop(), "alice", "repair");
  st = event_bill(st, "repair", "EUR").first;
  st = event_pay(st, 1);
  const Bill b = bill(st, 1);
  ASSERT_TRUE(b.date && b.t && b.npay);
  EXPECT_EQ(*b.date, 0);
  EXPECT_EQ(*b.npay, money("100", "EUR"));
  EXPECT_EQ(b.t->rate, Rational(11, 10));
  EXPECT_EQ(b.t->source, "EUR");
  EXPECT_EQ(b.t->target, "USD");
  // 100 * 11/10 = 110.
  EXPECT_EQ(st.cpay.at({"alice", "repair"}), money("110", "USD"));
  EXPECT_EQ(st.pay.at("repair"), "alice");
  EXPECT_TRUE(check_invariants(st).empty());
  EXPECT_THROW(event_pay(st, 1), GuardFailed);
  EXPECT_THROW(event_pay(st, 2), GuardFailed);
}

TEST(EventTest, PayRoundsOnce) {
  RateTable rates("USD");
  rates.set(0, "EUR", Rational(1, 3));
  CurrencyState st = engine_new({{"alice", "USD"}}, {"acme"}, {"repair"}, {{"repair", "acme"}},
                                {{"repair", money("100", "EUR")}}, rates);
  st = event_pay(event_bill(event_order(st, "alice", "repair"), "repair", "EUR").first, 1);
  // 100/3 to 34 significant digits.
  EXPECT_EQ(st.cpay.at({"alice", "repair"}), money("33.33333333333333333333333333333333", "USD"));
  EXPECT_TRUE(check_invariants(st).empty());
}

TEST(EventTest, LaterRateChangeKeepsSnapshot) {
  CurrencyState st = event_order(shop(), "alice", "repair");
  st = event_pay(event_bill(st, "repair", "EUR").first, 1);
  const Conversion snap = st.t.at(1);
  st = set_rate(st, 0, "EUR", Rational(2));
  st = set_rate(advance_clock(st, 7), 7, "EUR", Rational(3));
  EXPECT_EQ(st.t.at(1), snap);
  EXPECT_EQ(st.cpay.at({"alice", "repair"}), money("110", "USD"));
  EXPECT_TRUE(check_invariants(st).empty());

  // A later payment sees the new rate.
  st = event_order(st, "bruno", "paint");
  st = event_pay(event_bill(st, "paint", "USD").first, 2);
  // 40 USD at 1/3 EUR per USD.
  EXPECT_EQ(st.t.at(2).rate, Rational(1, 3));
  EXPECT_EQ(st.cpay.at({"bruno", "paint"}).code, "EUR");
  EXPECT_EQ(to_rational(st.cpay.at({"bruno", "paint"}).amount),
            to_rational(parse_decimal("13.33333333333333333333333333333333")));
}

TEST(EventTest, AdvanceThenPayUsesNewRate) {
  CurrencyState st = event_order(shop(), "alice", "repair");
  st = event_bill(st, "repair", "EUR").first;
  st = set_rate(st, 5, "EUR", Rational(5, 4));
  st = event_pay(advance_clock(st, 5), 1);
  EXPECT_EQ(*bill(st, 1).date, 5);
  EXPECT_EQ(st.cpay.at({"alice", "repair"}), money("125", "USD"));
}

TEST(EventTest, ClockAndRateErrors) {
  CurrencyState st = advance_clock(shop(), 3);
  EXPECT_EQ(advance_clock(st, 3).clock, 3);
  EXPECT_THROW(advance_clock(st, 2), ClockRegression);
  EXPECT_THROW(set_rate(st, 3, "EUR", Rational(0)), InvalidRate);
  EXPECT_THROW(set_rate(st, 3, "JPY", Rational(1)), InvalidRate);
  EXPECT_THROW(set_rate(st, 3, "USD", Rational(2)), InvalidRate);
}

TEST(EventTest, Serve) {
  CurrencyState st = event_order(shop(), "alice", "repair");
  st = event_bill(st, "repair", "EUR").first;
  EXPECT_THROW(event_serve(st, "repair"), GuardFailed);
  st = event_serve(event_pay(st, 1), "repair");
  EXPECT_EQ(st.deliver.at("repair"), "alice");
  EXPECT_THROW(event_serve(st, "repair"), GuardFailed);
  EXPECT_TRUE(check_invariants(st).empty());
}

namespace {

CurrencyState paid_shop() {
  CurrencyState st = event_order(shop(), "alice", "repair");
  return event_pay(event_bill(st, "repair", "EUR").first, 1);
}

}  // namespace

TEST(InvariantTest, DeliverOutsidePay) {
  CurrencyState st = shop();
  st.deliver["paint"] = "alice";
  EXPECT_TRUE(has(check_invariants(st), "inv5", "paint"));
}

TEST(InvariantTest, RelationChain) {
  CurrencyState st = shop();
  st.billing["paint"] = "alice";
  EXPECT_TRUE(has(check_invariants(st), "inv3", "paint"));
  st = shop();
  st.order["paint"] = "alice";
  st.billing["paint"] = "alice";
  st.pay["paint"] = "bruno";
  EXPECT_TRUE(has(check_invariants(st), "inv4", "paint"));
}

TEST(InvariantTest, CpayDiffersFromSnapshot) {
  CurrencyState st = paid_shop();
  st.cpay[{"alice", "repair"}] = money("111", "USD");
  EXPECT_TRUE(has(check_invariants(st), "inv22", "bill 1"));
}

TEST(InvariantTest, CpayRecomputedAtCurrentRateIsCaught) {
  // What an implementation that reconverts at the current rate would hold.
  CurrencyState st = set_rate(paid_shop(), 0, "EUR", Rational(2));
  st.cpay[{"alice", "repair"}] =
      Conversion{st.rates.conversion(st.clock, "EUR", "USD"), "EUR", "USD"}.apply(st.val.at(1));
  EXPECT_TRUE(has(check_invariants(st), "inv22"));
}

TEST(InvariantTest, MissingCpay) {
  CurrencyState st = paid_shop();
  st.cpay.clear();
  EXPECT_TRUE(has(check_invariants(st), "inv22", "no cpay"));
}

TEST(InvariantTest, BillBookkeeping) {
  CurrencyState st = paid_shop();
  st.val.erase(1);
  const auto v = check_invariants(st);
  EXPECT_TRUE(has(v, "inv10", "bill 1"));

  st = paid_shop();
  st.npay[1] = money("99", "EUR");
  EXPECT_TRUE(has(check_invariants(st), "inv20", "bill 1"));

  st = paid_shop();
  st.t.erase(1);
  const auto w = check_invariants(st);
  EXPECT_TRUE(has(w, "inv21b"));
  EXPECT_TRUE(has(w, "inv23"));
  EXPECT_TRUE(has(w, "inv24"));

  st = paid_shop();
  st.date.erase(1);
  EXPECT_TRUE(has(check_invariants(st), "inv21a"));

  st = paid_shop();
  st.ser[2] = "repair";
  st.bills.insert(2);
  st.val[2] = money("1", "EUR");
  st.cust[2] = "alice";
  st.prov[2] = "acme";
  EXPECT_TRUE(has(check_invariants(st), "M000.inv5", "repair"));

  st = paid_shop();
  st.pay.clear();
  EXPECT_TRUE(has(check_invariants(st), "inv17"));

  st = paid_shop();
  st.billing.erase("repair");
  EXPECT_TRUE(has(check_invariants(st), "inv15"));

  st = paid_shop();
  st.tariff.erase("paint");
  EXPECT_TRUE(has(check_invariants(st), "inv14", "paint"));
}

TEST(TraceTest, RandomTracesKeepInvariants) {
  const TraceReport r = run_random_traces(300, 100, 0);
  EXPECT_TRUE(r.ok()) << r.first_failure;
  EXPECT_EQ(r.traces, 300u);
  EXPECT_EQ(r.events, 30000u);
  EXPECT_EQ(r.checks, 30000u);
  EXPECT_GT(r.rate_changes_after_payment, 0u);
}

TEST(TraceTest, Deterministic) {
  const TraceReport a = run_random_traces(20, 100, 42);
  const TraceReport b = run_random_traces(20, 100, 42);
  EXPECT_EQ(a.events, b.events);
  EXPECT_EQ(a.rate_changes_after_payment, b.rate_changes_after_payment);
}

namespace {

struct Recorded {
  std::vector<Event> events;
  std::vector<Name> services;  // service touched by each event, empty for clock/rate
  CurrencyState final_state;
};

Recorded record(std::uint64_t seed, std::size_t length) {
  std::mt19937_64 gen(seed);
  Recorded r;
  CurrencyState st = random_engine(gen);
  for (std::size_t i = 0; i < length; ++i) {
    const Event e = random_event(st, gen);
    r.events.push_back(e);
    r.services.push_back(e.kind == EventKind::Pay ? st.ser.at(e.bill) : e.service);
    st = apply(std::move(st), e);
  }
  r.final_state = std::move(st);
  return r;
}

}  // namespace

TEST(TraceTest, ReplayIsBitExact) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const Recorded a = record(seed, 100);
    std::mt19937_64 gen(seed);
    CurrencyState st = random_engine(gen);
    for (const Event& e : a.events) st = apply(std::move(st), e);
    EXPECT_EQ(serialize(st), serialize(a.final_state));
    EXPECT_EQ(digest(st), digest(a.final_state));
    EXPECT_EQ(serialize(record(seed, 100).final_state), serialize(a.final_state));
  }
}

TEST(TraceTest, ProjectionsAreLegalAbstractTraces) {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const Recorded r = record(seed, 100);
    // Abstract machines over service -> customer relations.
    std::map<Name, Name> order0, deliver0;
    std::map<Name, Name> order, billing, pay, deliver;
    for (std::size_t i = 0; i < r.events.size(); ++i) {
      const Event& e = r.events[i];
      const Name& s = r.services[i];
      switch (e.kind) {
        case EventKind::Order:
          ASSERT_FALSE(order0.contains(s));
          order0[s] = e.customer;
          ASSERT_FALSE(order.contains(s));
          order[s] = e.customer;
          break;
        case EventKind::Bill:
          ASSERT_TRUE(order.contains(s));
          ASSERT_FALSE(billing.contains(s));
          billing[s] = order[s];
          break;
        case EventKind::Pay:
          ASSERT_TRUE(billing.contains(s));
          ASSERT_FALSE(pay.contains(s));
          pay[s] = billing[s];
          break;
        case EventKind::Serve:
          ASSERT_TRUE(order0.contains(s));
          ASSERT_FALSE(deliver0.contains(s));
          deliver0[s] = order0[s];
          ASSERT_TRUE(pay.contains(s));
          ASSERT_FALSE(deliver.contains(s));
          deliver[s] = pay[s];
          break;
        default: break;
      }
    }
    EXPECT_EQ(order, r.final_state.order);
    EXPECT_EQ(billing, r.final_state.billing);
    EXPECT_EQ(pay, r.final_state.pay);
    EXPECT_EQ(deliver, r.final_state.deliver);
    EXPECT_EQ(deliver0, r.final_state.deliver);
  }
}

TEST(TraceTest, CpayMatchesRationalOracle) {
  std::size_t payments = 0;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    std::mt19937_64 gen(seed);
    CurrencyState st = random_engine(gen);
    for (int i = 0; i < 100; ++i) {
      const Event e = random_event(st, gen);
      if (e.kind != EventKind::Pay) {
        st = apply(std::move(st), e);
        continue;
      }
      const Money v = st.val.at(e.bill);
      const Code target = st.customers.at(st.cust.at(e.bill));
      const Rational exact = to_rational(v.amount) * scheduled_rate(st.rates, st.clock, v.code) /
                             scheduled_rate(st.rates, st.clock, target);
      st = apply(std::move(st), e);
      const Money paid = st.cpay.at({st.cust.at(e.bill), st.ser.at(e.bill)});
      EXPECT_EQ(paid.code, target);
      EXPECT_EQ(paid.amount, from_rational(exact));
      ++payments;
    }
  }
  EXPECT_GT(payments, 500u);
}

TEST(ScenarioTest, Example) {
  const ScenarioResult r = run_scenario(R"(
reference USD
customer alice USD
provider acme
service repair acme 100 EUR
rate 0 EUR 11/10
order alice repair
bill repair EUR
clock 2
rate 2 EUR 6/5   # after billing, before payment
pay 1
rate 3 EUR 2
serve repair
)");
  EXPECT_TRUE(r.ok());
  ASSERT_EQ(r.steps.size(), 7u);
  EXPECT_EQ(r.steps[0].text, "order alice repair");
  EXPECT_EQ(r.steps[0].line, 7);
  EXPECT_EQ(r.final_state.cpay.at({"alice", "repair"}), money("120", "USD"));
  EXPECT_EQ(r.steps.back().digest, digest(r.final_state));
}

TEST(ScenarioTest, GuardFailuresAreRecorded) {
  const ScenarioResult r = run_scenario(
      "customer alice USD\nprovider acme\nservice repair acme 5 USD\n"
      "serve repair\norder alice repair\nclock 4\nclock 1\n");
  EXPECT_FALSE(r.ok());
  EXPECT_EQ(r.guard_failures(), 2u);
  EXPECT_EQ(r.violations(), 0u);
  EXPECT_EQ(r.steps[0].error_kind, ErrorKind::GuardFailed);
  EXPECT_EQ(r.steps[3].error_kind, ErrorKind::ClockRegression);
  EXPECT_EQ(r.final_state.clock, 4);
  EXPECT_EQ(r.final_state.order.at("repair"), "alice");
}

TEST(ScenarioTest, Malformed) {
  EXPECT_THROW(run_scenario("launch now\n"), ParseError);
  EXPECT_THROW(run_scenario("clock x\n"), ParseError);
  EXPECT_THROW(run_scenario("pay\n"), ParseError);
  EXPECT_THROW(run_scenario("rate 0 EUR zero\n"), ParseError);
  EXPECT_THROW(run_scenario("clock 1\nprovider acme\n"), ParseError);
  EXPECT_THROW(run_scenario("provider acme\nservice repair acme 5 USD\nservice paint acme 1 GBP\n"),
               InvalidRate);
  try {
    run_scenario("clock 1\n\nbogus\n");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos);
  }
}

TEST(ScenarioTest, RandomDirectiveIsSeeded) {
  const std::string text =
      "customer a EUR\ncustomer b USD\nprovider p\nrate 0 EUR 9/8\n"
      "service s1 p 10 EUR\nservice s2 p 20 USD\nservice s3 p 3.5 EUR\nrandom 60\n";
  const ScenarioResult a = run_scenario(text, 7);
  const ScenarioResult b = run_scenario(text, 7);
  EXPECT_TRUE(a.ok());
  ASSERT_EQ(a.steps.size(), 60u);
  EXPECT_EQ(serialize(a.final_state), serialize(b.final_state));
  for (std::size_t i = 0; i < a.steps.size(); ++i) EXPECT_EQ(a.steps[i].text, b.steps[i].text);
  EXPECT_EQ(a.steps[0].text.rfind("random: ", 0), 0u);
}

TEST(ScenarioTest, Corpus) {
  const ScenarioResult r = run_scenario(read_file(DIMCHECK_CORPUS_DIR "/settlement.scn"));
  EXPECT_TRUE(r.ok());
  EXPECT_EQ(r.final_state.cpay.at({"alice", "repair"}), money("110", "USD"));
  EXPECT_EQ(r.final_state.deliver.size(), 2u);
}
