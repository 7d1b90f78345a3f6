#include "dimcheck/currency_scenario.hpp"

#include <algorithm>
#include <charconv>
#include <optional>
#include <sstream>
#include <tuple>

#include "dimcheck/detail/seed.hpp"

namespace dimcheck::currency {

std::string to_string(const Event& e) {
  switch (e.kind) {
    case EventKind::Clock: return "clock " + std::to_string(e.date);
    case EventKind::Rate:
      return "rate " + std::to_string(e.date) + " " + e.code + " " + e.rate.to_string();
    case EventKind::Order: return "order " + e.customer + " " + e.service;
    case EventKind::Bill: return "bill " + e.service + " " + e.code;
    case EventKind::Pay: return "pay " + std::to_string(e.bill);
    case EventKind::Serve: return "serve " + e.service;
  }
  return {};
}

CurrencyState apply(CurrencyState st, const Event& e) {
  switch (e.kind) {
    case EventKind::Clock: return advance_clock(std::move(st), e.date);
    case EventKind::Rate: return set_rate(std::move(st), e.date, e.code, e.rate);
    case EventKind::Order: return event_order(std::move(st), e.customer, e.service);
    case EventKind::Bill: return event_bill(std::move(st), e.service, e.code).first;
    case EventKind::Pay: return event_pay(std::move(st), e.bill);
    case EventKind::Serve: return event_serve(std::move(st), e.service);
  }
  return st;
}

namespace {

template <class T>
const T& pick(const std::vector<T>& items, std::mt19937_64& gen) {
  return items[gen() % items.size()];
}

std::uint64_t below(std::mt19937_64& gen, std::uint64_t n) { return gen() % n; }

Rational random_rate(std::mt19937_64& gen) {
  static const long long kDenominators[] = {1, 2, 3, 4, 5, 7, 8, 10, 100, 1000};
  const long long q = kDenominators[below(gen, std::size(kDenominators))];
  const long long p = 1 + static_cast<long long>(below(gen, 30 * q));
  return Rational(p, q);
}

}  // namespace

CurrencyState random_engine(std::mt19937_64& gen) {
  static const std::vector<Code> kOthers = {"EUR", "GBP", "JPY", "CHF"};
  RateTable rates("USD");
  std::vector<Code> codes = {"USD"};
  for (const Code& c : kOthers) {
    if (below(gen, 4) == 0) continue;
    rates.set(0, c, random_rate(gen));
    codes.push_back(c);
  }
  std::map<Name, Code> customers;
  const std::uint64_t n_customers = 1 + below(gen, 5);
  for (std::uint64_t i = 1; i <= n_customers; ++i)
    customers["c" + std::to_string(i)] = pick(codes, gen);
  std::set<Name> providers;
  std::vector<Name> provider_list;
  const std::uint64_t n_providers = 1 + below(gen, 3);
  for (std::uint64_t i = 1; i <= n_providers; ++i) {
    provider_list.push_back("p" + std::to_string(i));
    providers.insert(provider_list.back());
  }
  std::set<Name> services;
  std::map<Name, Name> provider_of;
  std::map<Name, Money> tariff;
  const std::uint64_t n_services = 8 + below(gen, 13);
  for (std::uint64_t i = 1; i <= n_services; ++i) {
    const Name s = "s" + std::to_string(i);
    services.insert(s);
    provider_of[s] = pick(provider_list, gen);
    tariff[s] = Money{DecValue::scaled(BigInt(1 + below(gen, 100000)), -2), pick(codes, gen)};
  }
  return engine_new(std::move(customers), std::move(providers), std::move(services),
                    std::move(provider_of), std::move(tariff), std::move(rates));
}

Event random_event(const CurrencyState& st, std::mt19937_64& gen) {
  std::vector<Name> customers;
  for (const auto& [c, _] : st.customers) customers.push_back(c);
  std::vector<Name> orderable, billable, servable;
  std::vector<BillId> payable;
  for (const Name& s : st.services) {
    if (!customers.empty() && !st.order.contains(s)) orderable.push_back(s);
    if (st.order.contains(s) && !st.billing.contains(s)) billable.push_back(s);
    if (st.pay.contains(s) && !st.deliver.contains(s)) servable.push_back(s);
  }
  for (const BillId b : st.bills)
    if (!st.npay.contains(b)) payable.push_back(b);
  std::vector<Code> others;
  for (const Code& c : st.rates.codes())
    if (c != st.rates.reference()) others.push_back(c);

  std::vector<EventKind> enabled = {EventKind::Clock};
  if (!others.empty()) enabled.push_back(EventKind::Rate);
  if (!orderable.empty()) enabled.push_back(EventKind::Order);
  if (!billable.empty()) enabled.push_back(EventKind::Bill);
  if (!payable.empty()) enabled.push_back(EventKind::Pay);
  if (!servable.empty()) enabled.push_back(EventKind::Serve);

  Event e;
  e.kind = pick(enabled, gen);
  switch (e.kind) {
    case EventKind::Clock: e.date = st.clock + 1 + static_cast<Date>(below(gen, 3)); break;
    case EventKind::Rate:
      e.date = std::max<Date>(0, st.clock - 2 + static_cast<Date>(below(gen, 5)));
      e.code = pick(others, gen);
      e.rate = random_rate(gen);
      break;
    case EventKind::Order:
      e.customer = pick(customers, gen);
      e.service = pick(orderable, gen);
      break;
    case EventKind::Bill: {
      e.service = pick(billable, gen);
      const std::vector<Code> codes = st.rates.codes();
      e.code = pick(codes, gen);
      break;
    }
    case EventKind::Pay: e.bill = pick(payable, gen); break;
    case EventKind::Serve: e.service = pick(servable, gen); break;
  }
  return e;
}

TraceReport run_random_traces(std::uint64_t traces, std::size_t length, std::uint64_t seed) {
  TraceReport report;
  for (std::uint64_t i = 0; i < traces; ++i) {
    std::mt19937_64 gen(detail::splitmix(detail::splitmix(seed) ^ i));
    CurrencyState st = random_engine(gen);
    ++report.traces;
    for (std::size_t step = 0; step < length; ++step) {
      const Event e = random_event(st, gen);
      if (e.kind == EventKind::Rate && !st.npay.empty()) ++report.rate_changes_after_payment;
      std::string failure;
      try {
        st = apply(std::move(st), e);
        ++report.events;
        const std::vector<Violation> v = check_invariants(st);
        ++report.checks;
        if (!v.empty()) failure = v.front().invariant + ": " + v.front().witness;
      } catch (const Error& err) {
        failure = std::string(kind_name(err.kind())) + ": " + err.what();
      }
      if (!failure.empty()) {
        if (report.failures++ == 0)
          report.first_failure = "trace " + std::to_string(i) + " event " +
                                 std::to_string(step) + " (" + to_string(e) + "): " + failure;
        break;
      }
    }
  }
  return report;
}

std::size_t ScenarioResult::guard_failures() const {
  std::size_t n = 0;
  for (const ScenarioStep& s : steps)
    if (!s.ok) ++n;
  return n;
}

std::size_t ScenarioResult::violations() const {
  std::size_t n = 0;
  for (const ScenarioStep& s : steps) n += s.violations.size();
  return n;
}

namespace {

class ScenarioRunner {
 public:
  explicit ScenarioRunner(std::uint64_t seed) : gen_(detail::splitmix(seed)) {}

  ScenarioResult run(std::string_view text) {
    std::istringstream in{std::string(text)};
    std::string raw;
    while (std::getline(in, raw)) {
      ++line_;
      if (const auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
      std::istringstream words(raw);
      std::vector<std::string> w;
      for (std::string word; words >> word;) w.push_back(word);
      if (!w.empty()) line(w);
    }
    build();
    result_.final_state = std::move(*st_);
    return std::move(result_);
  }

 private:
  [[noreturn]] void fail(const std::string& message) const {
    throw ParseError("line " + std::to_string(line_) + ": " + message,
                     static_cast<std::size_t>(line_));
  }

  void arity(const std::vector<std::string>& w, std::size_t n) const {
    if (w.size() != n)
      fail("'" + w[0] + "' takes " + std::to_string(n - 1) + " arguments, got " +
           std::to_string(w.size() - 1));
  }

  std::int64_t integer(const std::string& text) const {
    std::int64_t v = 0;
    const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc() || end != text.data() + text.size())
      fail("expected an integer, found '" + text + "'");
    return v;
  }

  Rational rational(const std::string& text) const {
    try {
      return Rational::parse(text);
    } catch (const Error&) {
      fail("expected a rate p/q, found '" + text + "'");
    }
  }

  DecValue amount(const std::string& text) const {
    try {
      return parse_decimal(text);
    } catch (const Error&) {
      fail("expected an amount, found '" + text + "'");
    }
  }

  void setup(const std::vector<std::string>& w) {
    if (st_) fail("'" + w[0] + "' must come before the first event");
    if (w[0] == "reference") {
      arity(w, 2);
      reference_ = w[1];
    } else if (w[0] == "customer") {
      arity(w, 3);
      customers_[w[1]] = w[2];
    } else if (w[0] == "provider") {
      arity(w, 2);
      providers_.insert(w[1]);
    } else {
      arity(w, 5);
      services_.insert(w[1]);
      provider_of_[w[1]] = w[2];
      tariff_[w[1]] = Money{amount(w[3]), w[4]};
    }
  }

  void build() {
    if (st_) return;
    RateTable rates(reference_);
    for (const auto& [date, code, rate] : initial_rates_) rates.set(date, code, rate);
    st_ = engine_new(customers_, providers_, services_, provider_of_, tariff_, std::move(rates));
  }

  void line(const std::vector<std::string>& w) {
    const std::string& k = w[0];
    if (k == "reference" || k == "customer" || k == "provider" || k == "service") return setup(w);
    if (k == "rate" && !st_) {
      arity(w, 4);
      initial_rates_.emplace_back(integer(w[1]), w[2], rational(w[3]));
      return;
    }
    if (k == "random") {
      arity(w, 2);
      const std::int64_t n = integer(w[1]);
      if (n < 0) fail("random needs a non-negative count");
      build();
      for (std::int64_t i = 0; i < n; ++i) step(random_event(*st_, gen_), "random: ");
      return;
    }
    Event e;
    if (k == "clock") {
      arity(w, 2);
      e.kind = EventKind::Clock;
      e.date = integer(w[1]);
    } else if (k == "rate") {
      arity(w, 4);
      e.kind = EventKind::Rate;
      e.date = integer(w[1]);
      e.code = w[2];
      e.rate = rational(w[3]);
    } else if (k == "order") {
      arity(w, 3);
      e.kind = EventKind::Order;
      e.customer = w[1];
      e.service = w[2];
    } else if (k == "bill") {
      arity(w, 3);
      e.kind = EventKind::Bill;
      e.service = w[1];
      e.code = w[2];
    } else if (k == "pay") {
      arity(w, 2);
      e.kind = EventKind::Pay;
      const std::int64_t id = integer(w[1]);
      if (id < 0) fail("bill ids are positive");
      e.bill = static_cast<BillId>(id);
    } else if (k == "serve") {
      arity(w, 2);
      e.kind = EventKind::Serve;
      e.service = w[1];
    } else {
      fail("unknown directive '" + k + "'");
    }
    build();
    step(e, "");
  }

  void step(const Event& e, const std::string& prefix) {
    ScenarioStep s;
    s.line = line_;
    s.text = prefix + to_string(e);
    try {
      st_ = apply(*st_, e);
    } catch (const Error& err) {
      s.ok = false;
      s.error_kind = err.kind();
      s.error = err.what();
    }
    s.violations = check_invariants(*st_);
    s.digest = digest(*st_);
    result_.steps.push_back(std::move(s));
  }

  std::mt19937_64 gen_;
  int line_ = 0;
  Code reference_ = "USD";
  std::map<Name, Code> customers_;
  std::set<Name> providers_;
  std::set<Name> services_;
  std::map<Name, Name> provider_of_;
  std::map<Name, Money> tariff_;
  std::vector<std::tuple<Date, Code, Rational>> initial_rates_;
  std::optional<CurrencyState> st_;
  ScenarioResult result_;
};

}  // namespace

ScenarioResult run_scenario(std::string_view text, std::uint64_t seed) {
  return ScenarioRunner(seed).run(text);
}

}  // namespace dimcheck::currency
