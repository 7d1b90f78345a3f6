#include "dimcheck/properties.hpp"

#include <algorithm>
#include <atomic>
#include <functional>
#include <optional>
#include <random>
#include <sstream>
#include <thread>

#include "dimcheck/detail/seed.hpp"
#include "dimcheck/error.hpp"

namespace dimcheck {

namespace {

using Witness = std::optional<std::string>;
using Check = std::function<Witness(std::mt19937_64&)>;

struct Property {
  std::string name;
  Check check;
};

constexpr std::uint64_t kBatchSize = 1024;

using detail::splitmix;

std::uint64_t batch_seed(std::uint64_t seed, std::size_t property, std::uint64_t batch) {
  return splitmix(splitmix(splitmix(seed) ^ property) ^ batch);
}

struct BatchResult {
  std::uint64_t cases = 0;
  std::uint64_t failures = 0;
  std::string first_failure;
};

BatchResult run_batch(const Property& p, std::uint64_t seed, std::uint64_t cases) {
  BatchResult r;
  std::mt19937_64 gen(seed);
  for (std::uint64_t i = 0; i < cases; ++i) {
    Witness w;
    try {
      w = p.check(gen);
    } catch (const std::exception& e) {
      w = std::string("unexpected exception: ") + e.what();
    }
    ++r.cases;
    if (w) {
      if (r.failures == 0) r.first_failure = *w;
      ++r.failures;
    }
  }
  return r;
}

// Batches are merged in (property, batch) order, so the report is the same
// for any number of workers.
SelftestReport run_properties(const std::vector<Property>& props,
                              const SelftestOptions& options) {
  struct Task {
    std::size_t property;
    std::uint64_t batch;
    std::uint64_t cases;
  };
  std::vector<Task> tasks;
  for (std::size_t p = 0; p < props.size(); ++p) {
    for (std::uint64_t b = 0; b * kBatchSize < options.iterations; ++b)
      tasks.push_back({p, b, std::min(kBatchSize, options.iterations - b * kBatchSize)});
  }
  std::vector<BatchResult> results(tasks.size());
  std::atomic<std::size_t> next{0};
  const auto worker = [&] {
    for (std::size_t t = next++; t < tasks.size(); t = next++) {
      const Task& task = tasks[t];
      results[t] = run_batch(props[task.property],
                             batch_seed(options.seed, task.property, task.batch),
                             task.cases);
    }
  };
  const unsigned n = std::max(1U, options.workers);
  if (n == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned i = 0; i < n; ++i) pool.emplace_back(worker);
  }

  SelftestReport report;
  for (const Property& p : props) report.properties.push_back({p.name, 0, 0, {}});
  for (std::size_t t = 0; t < tasks.size(); ++t) {
    PropertyOutcome& out = report.properties[tasks[t].property];
    out.cases += results[t].cases;
    if (results[t].failures > 0 && out.failures == 0)
      out.first_failure = results[t].first_failure;
    out.failures += results[t].failures;
  }
  return report;
}

Rational abs(const Rational& r) { return r.sign() < 0 ? -r : r; }

Dimension random_dimension(std::mt19937_64& gen) {
  Dimension d;
  for (BaseDimension b : kBaseDimensions)
    d.set(b, static_cast<Dimension::Exponent>(gen() % 17) - 8);
  return d;
}

// Units with their equal-dimension partners.
class UnitPool {
 public:
  explicit UnitPool(const UnitRegistry& reg) : reg_(reg) {
    for (const Unit& u : reg.units()) units_.push_back(&u);
    for (const Unit* u : units_) {
      std::vector<const Unit*> same;
      for (const Unit* v : units_)
        if (v->dimension == u->dimension) same.push_back(v);
      partners_.push_back(std::move(same));
    }
  }

  const UnitRegistry& registry() const { return reg_; }
  std::size_t size() const { return units_.size(); }
  const Unit& at(std::size_t i) const { return *units_[i]; }

  std::size_t pick(std::mt19937_64& gen) const { return gen() % units_.size(); }
  const Unit& partner(std::size_t i, std::mt19937_64& gen) const {
    return *partners_[i][gen() % partners_[i].size()];
  }

 private:
  const UnitRegistry& reg_;
  std::vector<const Unit*> units_;
  std::vector<std::vector<const Unit*>> partners_;
};

Measurement draw(const Unit& u, std::mt19937_64& gen) {
  return random_measurement(u, gen());
}

std::string describe_round_trip(const Measurement& x, const Measurement& y,
                                const Measurement& back) {
  return to_string(x) + " -> " + to_string(y) + " -> " + to_string(back.value);
}

// The registry conversion there, then `back_scale`/`back_offset` for the way
// back (the registry's own definition or the reference one).
Witness check_round_trip(const Measurement& x, const Unit& via,
                         const Rational& via_scale, const Rational& via_offset,
                         const Rational& x_scale, const Rational& x_offset,
                         const PrecisionContext& ctx) {
  const Measurement y = convert(x, via, ctx);
  const Rational canonical = via_scale * to_rational(y.value) + via_offset;
  const Measurement back{from_rational((canonical - x_offset) / x_scale, ctx), x.unit};
  const Rational error = abs(to_rational(back.value) - to_rational(x.value));
  if (error <= round_trip_tolerance(x, y, via_scale / x_scale, ctx)) return std::nullopt;
  return describe_round_trip(x, y, back);
}

std::vector<Property> selftest_properties(const UnitPool& pool,
                                          const PrecisionContext& ctx) {
  std::vector<Property> props;
  const Dimension one = Dimension::one();

  props.push_back({"dimension.associativity", [](std::mt19937_64& g) -> Witness {
    const Dimension a = random_dimension(g), b = random_dimension(g),
                    c = random_dimension(g);
    if ((a * b) * c == a * (b * c)) return std::nullopt;
    return to_string(a) + ", " + to_string(b) + ", " + to_string(c);
  }});
  props.push_back({"dimension.commutativity", [](std::mt19937_64& g) -> Witness {
    const Dimension a = random_dimension(g), b = random_dimension(g);
    if (a * b == b * a) return std::nullopt;
    return to_string(a) + ", " + to_string(b);
  }});
  props.push_back({"dimension.identity", [one](std::mt19937_64& g) -> Witness {
    const Dimension a = random_dimension(g);
    if (a * one == a && one * a == a) return std::nullopt;
    return to_string(a);
  }});
  props.push_back({"dimension.inverse", [one](std::mt19937_64& g) -> Witness {
    const Dimension a = random_dimension(g);
    if (a * a.reciprocal() == one && a / a == one) return std::nullopt;
    return to_string(a);
  }});

  props.push_back({"decvalue.compare_matches_rational", [](std::mt19937_64& g) -> Witness {
    const DecValue a = random_value(g());
    // Close pairs as often as far ones.
    const DecValue b = (g() & 1U) ? random_value(g())
                                  : add(a, DecValue::make_float(
                                               static_cast<int>(g() % 3) - 1,
                                               a.exponent() - 11));
    const auto expected = to_rational(a) <=> to_rational(b);
    if (compare(a, b) == expected) return std::nullopt;
    return to_string(a) + " vs " + to_string(b);
  }});
  props.push_back({"decvalue.add_commutes", [ctx](std::mt19937_64& g) -> Witness {
    const DecValue a = random_value(g()), b = random_value(g());
    if (add(a, b, ctx) == add(b, a, ctx)) return std::nullopt;
    return to_string(a) + " + " + to_string(b);
  }});

  props.push_back({"measure.addition_guard", [&pool, ctx](std::mt19937_64& g) -> Witness {
    const std::size_t i = pool.pick(g);
    const Unit& ua = pool.at(i);
    const Unit& ub = (g() & 1U) ? pool.partner(i, g) : pool.at(pool.pick(g));
    const Measurement a = draw(ua, g), b = draw(ub, g);
    const bool same = ua.dimension == ub.dimension;
    int raised = 0;
    for (int op = 0; op < 3; ++op) {
      try {
        if (op == 0) add(a, b, ctx);
        if (op == 1) subtract(a, b, ctx);
        if (op == 2) compare(CompareOp::Lt, a, b, ctx);
      } catch (const DimensionMismatch&) {
        ++raised;
      }
    }
    if (raised == (same ? 0 : 3)) return std::nullopt;
    return ua.name + " with " + ub.name;
  }});
  props.push_back({"measure.first_unit_rule", [&pool, ctx](std::mt19937_64& g) -> Witness {
    const std::size_t i = pool.pick(g);
    const Measurement a = draw(pool.at(i), g), b = draw(pool.partner(i, g), g);
    if (add(a, b, ctx).unit == a.unit && subtract(a, b, ctx).unit == a.unit)
      return std::nullopt;
    return to_string(a) + " + " + to_string(b);
  }});
  props.push_back({"measure.canonical_commutativity", [&pool, ctx](std::mt19937_64& g) -> Witness {
    const std::size_t i = pool.pick(g);
    const Unit& ua = pool.at(i);
    const Unit& ub = pool.partner(i, g);
    // a.value + convert(b, a.unit) is not symmetric across different offsets.
    if (ua.offset != ub.offset) return std::nullopt;
    const Measurement a = draw(ua, g), b = draw(ub, g);
    const Measurement ab = add(a, b, ctx), ba = add(b, a, ctx);
    const DecValue ca = from_rational(canonical_value(ab), ctx);
    const DecValue cb = from_rational(canonical_value(ba), ctx);
    // Half an ulp for each of the four roundings, mapped to canonical scale.
    const Rational budget =
        (to_rational(ulp(ab.value, ctx)) * ua.scale + to_rational(ulp(ba.value, ctx)) * ub.scale +
         to_rational(ulp(ca, ctx)) + to_rational(ulp(cb, ctx))) / 2;
    if (abs(to_rational(ca) - to_rational(cb)) <= budget) return std::nullopt;
    return to_string(a) + " + " + to_string(b);
  }});
  props.push_back({"measure.round_trip", [&pool, ctx](std::mt19937_64& g) -> Witness {
    const std::size_t i = pool.pick(g);
    const Unit& u1 = pool.at(i);
    const Unit& u2 = pool.partner(i, g);
    return check_round_trip(draw(u1, g), u2, u2.scale, u2.offset, u1.scale, u1.offset, ctx);
  }});
  props.push_back({"measure.reference_round_trip", [&pool, ctx](std::mt19937_64& g) -> Witness {
    const std::size_t i = pool.pick(g);
    const Unit& u1 = pool.at(i);
    const Unit& u2 = pool.partner(i, g);
    const ReferenceUnit* r1 = find_reference(u1.name);
    const ReferenceUnit* r2 = find_reference(u2.name);
    if (r1 == nullptr || r2 == nullptr) return std::nullopt;
    return check_round_trip(draw(u1, g), u2, r2->scale, r2->offset, r1->scale, r1->offset, ctx);
  }});
  props.push_back({"measure.product_dimension", [&pool, ctx](std::mt19937_64& g) -> Witness {
    const Unit& ua = pool.at(pool.pick(g));
    const Unit& ub = pool.at(pool.pick(g));
    const Measurement a = draw(ua, g), b = draw(ub, g);
    const UnitRegistry& names = pool.registry();
    if (multiply(names, a, b, ctx).dimension() != ua.dimension * ub.dimension)
      return to_string(a) + " * " + to_string(b);
    if (!canonical_value(b).is_zero() && !b.value.is_zero() &&
        divide(names, a, b, ctx).dimension() != ua.dimension / ub.dimension)
      return to_string(a) + " / " + to_string(b);
    return std::nullopt;
  }});
  props.push_back({"measure.comparison_invariance", [&pool, ctx](std::mt19937_64& g) -> Witness {
    const std::size_t i = pool.pick(g);
    const Unit& ub = pool.partner(i, g);
    const Unit& ua2 = pool.partner(i, g);
    const Unit& ub2 = pool.partner(i, g);
    const Measurement a = draw(pool.at(i), g);
    const Measurement b = (g() & 1U) ? convert(a, ub, ctx) : draw(ub, g);
    const Measurement a2 = convert(a, ua2, ctx), b2 = convert(b, ub2, ctx);
    const Rational ca = canonical_value(a), cb = canonical_value(b);
    const bool exact = canonical_value(a2) == ca && canonical_value(b2) == cb;
    const Rational budget = to_rational(ulp(a2.value, ctx)) * ua2.scale +
                            to_rational(ulp(b2.value, ctx)) * ub2.scale;
    const bool strict = exact || abs(ca - cb) > budget;
    for (CompareOp op : {CompareOp::Eq, CompareOp::Ne, CompareOp::Lt, CompareOp::Le,
                         CompareOp::Gt, CompareOp::Ge}) {
      const bool before = compare(op, a, b, ctx);
      const bool after = compare(op, a2, b2, ctx);
      // Conversion into one unit is monotone in the exact order.
      const bool monotone_case = ua2 == ub2 && ((op == CompareOp::Le && ca <= cb) ||
                                                (op == CompareOp::Ge && ca >= cb));
      if ((strict && before != after) || (!strict && monotone_case && !after))
        return std::string(compare_op_name(op)) + "(" + to_string(a) + ", " +
               to_string(b) + ") via " + ua2.name + ", " + ub2.name;
    }
    return std::nullopt;
  }});
  return props;
}

ReferenceUnit ref(std::string name, Rational scale, Rational offset = 0) {
  return {std::move(name), std::move(scale), std::move(offset)};
}

}  // namespace

const std::vector<ReferenceUnit>& reference_units() {
  static const std::vector<ReferenceUnit> table = [] {
    const Rational metre = 1;
    const Rational second = 1;
    const Rational kilogram = 1;
    const Rational gram = kilogram / 1000;
    const Rational kilometre = metre * 1000;
    const Rational inch = Rational(254, 100) * metre / 100;
    const Rational mile = Rational(1609344, 1000) * metre;
    const Rational millisecond = second / 1000;
    const Rational hour = 3600 * second;
    // 0 °F = 459.67 °R and 1 °R = 5/9 K.
    const Rational rankine(5, 9);
    return std::vector<ReferenceUnit>{
        ref("Kilogram", kilogram), ref("kilogram", kilogram),
        ref("gram", gram), ref("pound", Rational(45359237, 100000) * gram),
        ref("Metre", metre), ref("metre", metre),
        ref("centimetre", metre / 100), ref("kilometre", kilometre),
        ref("inch", inch), ref("mile", mile),
        ref("Second", second), ref("second", second),
        ref("millisecond", millisecond), ref("decisecond", second / 10),
        ref("minute", 60 * second), ref("hour", hour),
        ref("Kelvin", 1), ref("kelvin", 1),
        ref("celsius", 1, Rational(27315, 100)),
        ref("fahrenheit", rankine, Rational(45967, 100) * rankine),
        ref("Ampere", 1), ref("ampere", 1), ref("Candela", 1), ref("candela", 1),
        ref("Mole", 1), ref("mole", 1),
        ref("mps", metre / second), ref("kph", kilometre / hour),
        ref("mph", mile / hour), ref("ipms", inch / millisecond),
    };
  }();
  return table;
}

const ReferenceUnit* find_reference(std::string_view name) {
  for (const ReferenceUnit& r : reference_units())
    if (r.name == name) return &r;
  return nullptr;
}

Rational round_trip_tolerance(const Measurement& x, const Measurement& via,
                              const Rational& via_scale,
                              const PrecisionContext& ctx) {
  Rational tol = x.value.is_zero() ? Rational(0) : to_rational(ulp(x.value, ctx));
  if (!via.value.is_zero()) tol = std::max(tol, to_rational(ulp(via.value, ctx)) * via_scale);
  return tol;
}

std::uint64_t SelftestReport::evaluations() const {
  std::uint64_t n = 0;
  for (const auto& p : properties) n += p.cases;
  return n;
}

std::uint64_t SelftestReport::failures() const {
  std::uint64_t n = 0;
  for (const auto& p : properties) n += p.failures;
  return n;
}

SelftestReport run_selftest(const UnitRegistry& reg, const SelftestOptions& options) {
  const PrecisionContext ctx(options.precision);
  const UnitPool pool(reg);
  std::vector<Property> props;
  for (Property& p : selftest_properties(pool, ctx))
    if (p.name.starts_with(options.filter)) props.push_back(std::move(p));
  return run_properties(props, options);
}

SelftestReport run_round_trip_suite(const UnitRegistry& reg,
                                    const SelftestOptions& options) {
  const PrecisionContext ctx(options.precision);
  std::vector<Property> props;
  for (const Unit& u1 : reg.units()) {
    for (const Unit& u2 : reg.units()) {
      if (u1.dimension != u2.dimension) continue;
      const std::string pair = u1.name + "->" + u2.name;
      props.push_back({"round_trip " + pair, [&u1, &u2, ctx](std::mt19937_64& g) {
        return check_round_trip(draw(u1, g), u2, u2.scale, u2.offset, u1.scale,
                                u1.offset, ctx);
      }});
      const ReferenceUnit* r1 = find_reference(u1.name);
      const ReferenceUnit* r2 = find_reference(u2.name);
      if (r1 == nullptr || r2 == nullptr) continue;
      props.push_back({"reference_round_trip " + pair, [&u1, &u2, r1, r2, ctx](std::mt19937_64& g) {
        return check_round_trip(draw(u1, g), u2, r2->scale, r2->offset, r1->scale,
                                r1->offset, ctx);
      }});
    }
  }
  return run_properties(props, options);
}

std::string render_report(const SelftestReport& report) {
  std::ostringstream out;
  for (const PropertyOutcome& p : report.properties) {
    if (p.ok()) {
      out << "PASS " << p.name << " " << p.cases << "\n";
    } else {
      out << "FAIL " << p.name << " " << p.failures << "/" << p.cases << ": "
          << p.first_failure << "\n";
    }
  }
  out << (report.ok() ? "PASS" : "FAIL") << " total " << report.evaluations()
      << " evaluations, " << report.failures() << " failures\n";
  return out.str();
}

}  // namespace dimcheck
