#include "dimcheck/currency.hpp"

#include <algorithm>
#include <sstream>

namespace dimcheck::currency {

namespace {

[[noreturn]] void guard_failed(const std::string& message) { throw GuardFailed(message); }

Money convert(const Money& m, const Rational& factor, const Code& target,
              const PrecisionContext& ctx) {
  return Money{multiply(m.amount, factor, ctx), target};
}

}  // namespace

std::string to_string(const Money& m) { return to_string(m.amount) + " " + m.code; }

Money add(const Money& a, const Money& b, const PrecisionContext& ctx) {
  if (a.code != b.code) throw CurrencyMismatch("cannot add " + a.code + " and " + b.code);
  return Money{dimcheck::add(a.amount, b.amount, ctx), a.code};
}

Money subtract(const Money& a, const Money& b, const PrecisionContext& ctx) {
  if (a.code != b.code) throw CurrencyMismatch("cannot subtract " + b.code + " from " + a.code);
  return Money{dimcheck::subtract(a.amount, b.amount, ctx), a.code};
}

RateTable::RateTable(Code reference) : reference_(std::move(reference)) {
  rates_[reference_][0] = Rational(1);
}

std::vector<Code> RateTable::codes() const {
  std::vector<Code> out;
  for (const auto& [code, _] : rates_) out.push_back(code);
  return out;
}

void RateTable::set(Date date, const Code& code, const Rational& rate) {
  if (date < 0) throw InvalidRate("negative date " + std::to_string(date));
  if (rate.sign() <= 0) throw InvalidRate("rate for " + code + " must be positive, got " + rate.to_string());
  if (code == reference_ && rate != Rational(1))
    throw InvalidRate("reference currency " + code + " has rate 1, got " + rate.to_string());
  rates_[code][date] = rate;
}

const Rational& RateTable::rate(Date date, const Code& code) const {
  const auto it = rates_.find(code);
  if (it != rates_.end()) {
    auto at = it->second.upper_bound(date);
    if (at != it->second.begin()) return std::prev(at)->second;
  }
  throw InvalidRate("no rate for " + code + " at date " + std::to_string(date));
}

Rational RateTable::conversion(Date date, const Code& from, const Code& to) const {
  return rate(date, from) / rate(date, to);
}

Money Conversion::apply(const Money& m, const PrecisionContext& ctx) const {
  if (m.code != source)
    throw CurrencyMismatch("conversion from " + source + " applied to " + m.code);
  return convert(m, rate, target, ctx);
}

CurrencyState engine_new(std::map<Name, Code> customers, std::set<Name> providers,
                         std::set<Name> services, std::map<Name, Name> service_provider,
                         std::map<Name, Money> tariff, RateTable rates,
                         const PrecisionContext& ctx) {
  for (const Name& s : services) {
    const auto it = service_provider.find(s);
    if (it == service_provider.end()) guard_failed("service " + s + " has no provider");
    if (!providers.contains(it->second))
      guard_failed("service " + s + " names unknown provider " + it->second);
    const auto price = tariff.find(s);
    if (price == tariff.end()) throw IncompleteTariff("service " + s + " has no tariff");
    rates.rate(0, price->second.code);
  }
  for (const auto& [s, _] : service_provider)
    if (!services.contains(s)) guard_failed("provider assigned to unknown service " + s);
  for (const auto& [s, _] : tariff)
    if (!services.contains(s)) guard_failed("tariff for unknown service " + s);
  for (const auto& [c, code] : customers) rates.rate(0, code);
  for (const Code& code : rates.codes()) rates.rate(0, code);

  CurrencyState st;
  st.customers = std::move(customers);
  st.providers = std::move(providers);
  st.services = std::move(services);
  st.provider_of = std::move(service_provider);
  st.tariff = std::move(tariff);
  st.rates = std::move(rates);
  st.ctx = ctx;
  return st;
}

CurrencyState event_order(CurrencyState st, const Name& customer, const Name& service) {
  if (!st.customers.contains(customer)) guard_failed("order: unknown customer " + customer);
  if (!st.services.contains(service)) guard_failed("order: unknown service " + service);
  if (st.order.contains(service)) guard_failed("order: service " + service + " is already ordered");
  st.order.emplace(service, customer);
  return st;
}

std::pair<CurrencyState, Bill> event_bill(CurrencyState st, const Name& service,
                                          const Code& bill_currency) {
  const auto ordered = st.order.find(service);
  if (ordered == st.order.end()) guard_failed("bill: service " + service + " is not ordered");
  if (st.billing.contains(service)) guard_failed("bill: service " + service + " is already billed");
  for (const auto& [_, s] : st.ser)
    if (s == service) guard_failed("bill: service " + service + " already has a bill");
  if (!st.rates.knows(bill_currency)) guard_failed("bill: unknown currency " + bill_currency);

  const Money& price = st.tariff.at(service);
  const BillId id = st.next_bill++;
  st.bills.insert(id);
  st.val[id] = convert(price, st.rates.conversion(st.clock, price.code, bill_currency),
                       bill_currency, st.ctx);
  st.cust[id] = ordered->second;
  st.prov[id] = st.provider_of.at(service);
  st.ser[id] = service;
  st.billing.emplace(service, ordered->second);
  Bill b = bill(st, id);
  return {std::move(st), std::move(b)};
}

CurrencyState event_pay(CurrencyState st, BillId id) {
  if (!st.bills.contains(id)) guard_failed("pay: unknown bill " + std::to_string(id));
  if (st.npay.contains(id)) guard_failed("pay: bill " + std::to_string(id) + " is already paid");
  const Money& v = st.val.at(id);
  const Name& c = st.cust.at(id);
  const Name& s = st.ser.at(id);
  const Code& target = st.customers.at(c);
  Conversion snapshot{st.rates.conversion(st.clock, v.code, target), v.code, target};
  st.cpay[{c, s}] = snapshot.apply(v, st.ctx);
  st.date[id] = st.clock;
  st.t[id] = std::move(snapshot);
  st.npay[id] = v;
  st.pay[s] = c;
  return st;
}

CurrencyState event_serve(CurrencyState st, const Name& service) {
  const auto paid = st.pay.find(service);
  if (paid == st.pay.end()) guard_failed("serve: service " + service + " is not paid");
  if (st.deliver.contains(service)) guard_failed("serve: service " + service + " is already delivered");
  st.deliver.emplace(service, paid->second);
  return st;
}

CurrencyState advance_clock(CurrencyState st, Date new_date) {
  if (new_date < st.clock)
    throw ClockRegression("clock " + std::to_string(st.clock) + " cannot move back to " +
                          std::to_string(new_date));
  st.clock = new_date;
  return st;
}

CurrencyState set_rate(CurrencyState st, Date date, const Code& code, const Rational& rate) {
  if (!st.rates.knows(code)) throw InvalidRate("unknown currency " + code);
  st.rates.set(date, code, rate);
  return st;
}

Bill bill(const CurrencyState& st, BillId id) {
  if (!st.bills.contains(id)) guard_failed("unknown bill " + std::to_string(id));
  Bill b;
  b.id = id;
  b.val = st.val.at(id);
  b.cust = st.cust.at(id);
  b.prov = st.prov.at(id);
  b.ser = st.ser.at(id);
  if (const auto it = st.date.find(id); it != st.date.end()) b.date = it->second;
  if (const auto it = st.t.find(id); it != st.t.end()) b.t = it->second;
  if (const auto it = st.npay.find(id); it != st.npay.end()) b.npay = it->second;
  return b;
}

namespace {

template <class K>
const K& key_of(const K& k) { return k; }
template <class K, class V>
const K& key_of(const std::pair<const K, V>& kv) { return kv.first; }

std::string show(const std::string& s) { return s; }
std::string show(BillId id) { return "bill " + std::to_string(id); }

class Checker {
 public:
  explicit Checker(const CurrencyState& st) : st_(st) {}

  std::vector<Violation> run() {
    subset("inv3", st_.billing, st_.order, "service ");
    subset("inv4", st_.pay, st_.billing, "service ");
    subset("inv5", st_.deliver, st_.pay, "service ");

    for (const auto& [b, c] : st_.cust)
      if (!st_.customers.contains(c)) add("M000.inv3", show(b) + " has unknown customer " + c);
    for (const auto& [b, p] : st_.prov)
      if (!st_.providers.contains(p)) add("M000.inv4", show(b) + " has unknown provider " + p);
    std::map<Name, BillId> first;
    for (const auto& [b, s] : st_.ser) {
      if (!st_.services.contains(s)) add("M000.inv5", show(b) + " has unknown service " + s);
      const auto [it, fresh] = first.emplace(s, b);
      if (!fresh) add("M000.inv5", "service " + s + " on " + show(it->second) + " and " + show(b));
    }

    equal_sets("inv10", st_.bills, st_.val, "bills", "dom(val)");
    equal_sets("inv11", st_.bills, st_.cust, "bills", "dom(cust)");
    equal_sets("inv12", st_.bills, st_.prov, "bills", "dom(prov)");
    equal_sets("inv13", st_.bills, st_.ser, "bills", "dom(ser)");

    for (const Name& s : st_.services) {
      const auto it = st_.tariff.find(s);
      if (it == st_.tariff.end())
        add("inv14", "service " + s + " has no tariff");
      else if (!st_.rates.knows(it->second.code))
        add("inv14", "service " + s + " is priced in unknown currency " + it->second.code);
    }

    std::set<Name> ran_ser;
    for (const auto& [_, s] : st_.ser) ran_ser.insert(s);
    equal_sets("inv15", st_.billing, ran_ser, "dom(billing)", "ran(ser)");
    subset_sets("inv16", st_.npay, st_.ser, "dom(npay)", "dom(ser)");
    std::set<Name> paid_services;
    for (const auto& [b, _] : st_.npay)
      if (const auto it = st_.ser.find(b); it != st_.ser.end()) paid_services.insert(it->second);
    equal_sets("inv17", st_.pay, paid_services, "dom(pay)", "ser[dom(npay)]");
    subset_sets("inv19", st_.npay, st_.bills, "dom(npay)", "bills");

    for (const auto& [b, paid] : st_.npay) {
      const auto it = st_.val.find(b);
      if (st_.bills.contains(b) && it != st_.val.end() && !(it->second == paid))
        add("inv20", show(b) + ": val " + to_string(it->second) + " but npay " + to_string(paid));
    }

    for (const auto& [key, _] : st_.cpay)
      if (!st_.customers.contains(key.first) || !st_.services.contains(key.second))
        add("inv21a", "cpay entry (" + key.first + ", " + key.second + ") outside C x S");
    equal_sets("inv21a", st_.npay, st_.date, "dom(npay)", "dom(date)");
    equal_sets("inv21b", st_.t, st_.date, "dom(t)", "dom(date)");
    equal_sets("inv21b", st_.npay, st_.t, "dom(npay)", "dom(t)");

    for (const BillId b : st_.bills) {
      if (!st_.date.contains(b)) continue;
      inv22(b);
    }

    equal_sets("inv23", st_.t, st_.date, "dom(t)", "dom(date)");
    equal_sets("inv24", st_.npay, st_.t, "dom(npay)", "dom(t)");
    return std::move(out_);
  }

 private:
  void add(std::string invariant, std::string witness) {
    out_.push_back(Violation{std::move(invariant), std::move(witness)});
  }

  // Relation inclusion: every pair of `small` is a pair of `big`.
  void subset(const char* name, const std::map<Name, Name>& small,
              const std::map<Name, Name>& big, const std::string& prefix) {
    for (const auto& [s, c] : small) {
      const auto it = big.find(s);
      if (it == big.end() || it->second != c) add(name, prefix + s + " (customer " + c + ")");
    }
  }

  // Key inclusion between sorted containers (sets, or maps by domain).
  template <class A, class B>
  void subset_sets(const char* name, const A& small, const B& big, const char* small_name,
                   const char* big_name) {
    auto it = big.begin();
    for (const auto& item : small) {
      const auto& k = key_of(item);
      while (it != big.end() && key_of(*it) < k) ++it;
      if (it == big.end() || k < key_of(*it))
        add(name, show(k) + " in " + small_name + " but not in " + big_name);
    }
  }

  template <class A, class B>
  void equal_sets(const char* name, const A& a, const B& b, const char* a_name,
                  const char* b_name) {
    subset_sets(name, a, b, a_name, b_name);
    subset_sets(name, b, a, b_name, a_name);
  }

  void inv22(BillId b) {
    const auto c = st_.cust.find(b);
    const auto s = st_.ser.find(b);
    const auto v = st_.val.find(b);
    const auto conv = st_.t.find(b);
    if (c == st_.cust.end() || s == st_.ser.end() || v == st_.val.end() || conv == st_.t.end()) {
      add("inv22", show(b) + " is dated but incomplete");
      return;
    }
    const auto paid = st_.cpay.find({c->second, s->second});
    if (paid == st_.cpay.end()) {
      add("inv22", show(b) + ": no cpay for (" + c->second + ", " + s->second + ")");
      return;
    }
    if (conv->second.source != v->second.code) {
      add("inv22", show(b) + ": t converts from " + conv->second.source + " but val is in " +
                       v->second.code);
      return;
    }
    const Money expected = conv->second.apply(v->second, st_.ctx);
    if (!(paid->second == expected))
      add("inv22", show(b) + ": cpay " + to_string(paid->second) + " but t(val) " +
                       to_string(expected));
  }

  const CurrencyState& st_;
  std::vector<Violation> out_;
};

}  // namespace

std::vector<Violation> check_invariants(const CurrencyState& st) { return Checker(st).run(); }

std::string serialize(const CurrencyState& st) {
  std::ostringstream out;
  out << "clock " << st.clock << "\nnext " << st.next_bill << "\nprecision "
      << st.ctx.significant_digits() << "\nreference " << st.rates.reference() << "\n";
  for (const auto& [code, steps] : st.rates.schedule())
    for (const auto& [d, r] : steps) out << "rate " << d << " " << code << " " << r.to_string() << "\n";
  for (const auto& [c, code] : st.customers) out << "customer " << c << " " << code << "\n";
  for (const Name& p : st.providers) out << "provider " << p << "\n";
  for (const Name& s : st.services) out << "service " << s << "\n";
  for (const auto& [s, p] : st.provider_of) out << "provided " << s << " " << p << "\n";
  for (const auto& [s, m] : st.tariff) out << "tariff " << s << " " << to_string(m) << "\n";
  const auto relation = [&](const char* name, const std::map<Name, Name>& r) {
    for (const auto& [s, c] : r) out << name << " " << s << " " << c << "\n";
  };
  relation("order", st.order);
  relation("billing", st.billing);
  relation("pay", st.pay);
  relation("deliver", st.deliver);
  for (const BillId b : st.bills) out << "bill " << b << "\n";
  for (const auto& [b, m] : st.val) out << "val " << b << " " << to_string(m) << "\n";
  for (const auto& [b, c] : st.cust) out << "cust " << b << " " << c << "\n";
  for (const auto& [b, p] : st.prov) out << "prov " << b << " " << p << "\n";
  for (const auto& [b, s] : st.ser) out << "ser " << b << " " << s << "\n";
  for (const auto& [b, d] : st.date) out << "date " << b << " " << d << "\n";
  for (const auto& [b, c] : st.t)
    out << "t " << b << " " << c.source << " " << c.target << " " << c.rate.to_string() << "\n";
  for (const auto& [b, m] : st.npay) out << "npay " << b << " " << to_string(m) << "\n";
  for (const auto& [key, m] : st.cpay)
    out << "cpay " << key.first << " " << key.second << " " << to_string(m) << "\n";
  return out.str();
}

std::uint64_t digest(const CurrencyState& st) {
  std::uint64_t h = 14695981039346656037ULL;
  for (const unsigned char ch : serialize(st)) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  return h;
}

}  // namespace dimcheck::currency
