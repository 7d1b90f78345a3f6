#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dimcheck/currency_scenario.hpp"
#include "dimcheck/error.hpp"
#include "dimcheck/measure.hpp"
#include "dimcheck/properties.hpp"
#include "dimcheck/quantlang/checker.hpp"
#include "dimcheck/quantlang/evaluator.hpp"
#include "dimcheck/quantlang/parser.hpp"

namespace {

using namespace dimcheck;

constexpr int kOk = 0;
constexpr int kFailures = 1;
constexpr int kUsage = 2;

/// Input that cannot be read or is malformed; reported with exit code 2.
struct InputError {
  std::string message;
};

struct Config {
  std::string registry;
  int precision = PrecisionContext::kDefaultDigits;
  std::string format = "plain";

  bool machine() const { return format == "machine"; }
  PrecisionContext ctx() const { return PrecisionContext(precision); }
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError{"cannot read '" + path + "'"};
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

std::string registry_path(const Config& cfg) {
  if (!cfg.registry.empty()) return cfg.registry;
  if (const char* env = std::getenv("DIMCHECK_REGISTRY"); env != nullptr && *env != '\0')
    return env;
  return {};
}

UnitRegistry load(const Config& cfg) {
  const std::string path = registry_path(cfg);
  if (path.empty()) return default_registry();
  UnitRegistry reg = UnitRegistry::standard();
  load_registry_text(reg, read_file(path), path);
  return reg;
}

void report_error(const Error& e) {
  std::cerr << "dimcheck: " << kind_name(e.kind()) << ": " << e.what() << "\n";
}

bool is_input_error(const Error& e) {
  return e.kind() == ErrorKind::ParseError || e.kind() == ErrorKind::LexError ||
         e.kind() == ErrorKind::RegistryFormat;
}

int run_check(const Config& cfg, const std::string& file, const std::vector<std::string>& sets) {
  std::map<std::string, DecValue> values;
  for (const std::string& s : sets) {
    const auto eq = s.find('=');
    if (eq == std::string::npos || eq == 0)
      throw InputError{"--set expects name=number, got '" + s + "'"};
    try {
      values[s.substr(0, eq)] = parse_decimal(s.substr(eq + 1));
    } catch (const Error&) {
      throw InputError{"--set expects name=number, got '" + s + "'"};
    }
  }
  const UnitRegistry reg = load(cfg);
  const quantlang::Program program = quantlang::parse_source(read_file(file));
  const quantlang::CheckReport report = quantlang::run_program(program, reg, values, cfg.ctx());
  for (const quantlang::Verdict& v : report.verdicts) {
    if (cfg.machine())
      std::cout << quantlang::format_machine(v, file) << "\n";
    else
      (v.ok ? std::cout : std::cerr) << quantlang::format_plain(v, file) << "\n";
  }
  return report.ok() ? kOk : kFailures;
}

int run_eval(const Config& cfg, const std::string& source, const std::string& in_unit) {
  quantlang::Scope scope;
  scope.units = load(cfg);
  const quantlang::ExprPtr expr = quantlang::parse_expression(source);
  try {
    quantlang::infer_located(*expr, scope);
  } catch (const quantlang::Diagnostic& d) {
    std::cerr << "<expr>:" << d.pos.line << ":" << d.pos.column << ": " << kind_name(d.kind)
              << ": " << d.message << "\n";
    return kFailures;
  }
  quantlang::Value value = quantlang::evaluate(*expr, scope, {}, cfg.ctx());
  if (!in_unit.empty()) {
    const Measurement* m = std::get_if<Measurement>(&value);
    if (m == nullptr) throw DimensionMismatch("a comparison has no unit to convert");
    value = convert(*m, scope.units.get(in_unit), cfg.ctx());
  }
  std::cout << quantlang::to_string(value) << "\n";
  return kOk;
}

int run_convert(const Config& cfg, const std::string& number, const std::string& from,
                const std::string& to) {
  const UnitRegistry reg = load(cfg);
  DecValue value;
  try {
    value = parse_decimal(number);
  } catch (const Error&) {
    throw InputError{"not a number: '" + number + "'"};
  }
  const Measurement m = reg.make(value, from);
  std::cout << to_string(convert(m, reg.get(to), cfg.ctx())) << "\n";
  return kOk;
}

int run_units(const Config& cfg) {
  const UnitRegistry reg = load(cfg);
  if (!cfg.machine()) {
    std::cout << render_registry(reg);
    return kOk;
  }
  for (const Unit& u : reg.units())
    std::cout << u.name << "\t" << to_string(u.dimension) << "\t" << u.scale.to_string() << "\t"
              << u.offset.to_string() << "\n";
  return kOk;
}

std::string hex(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

int run_currency(const std::string& file, std::uint64_t seed, bool trace) {
  const currency::ScenarioResult r = currency::run_scenario(read_file(file), seed);
  for (const currency::ScenarioStep& s : r.steps) {
    if (trace) std::cout << s.line << "\t" << s.text << "\t" << hex(s.digest) << "\n";
    if (!s.ok)
      std::cerr << file << ":" << s.line << ": " << kind_name(s.error_kind) << ": " << s.error
                << " (" << s.text << ")\n";
    for (const currency::Violation& v : s.violations)
      std::cerr << file << ":" << s.line << ": InvariantViolation: " << v.invariant << ": "
                << v.witness << "\n";
  }
  std::cout << r.steps.size() << " events, " << r.guard_failures() << " guard failures, "
            << r.violations() << " invariant violations, final digest "
            << hex(currency::digest(r.final_state)) << "\n";
  return r.ok() ? kOk : kFailures;
}

int run_selftest(const Config& cfg, const SelftestOptions& opts) {
  SelftestOptions o = opts;
  o.precision = cfg.precision;
  const SelftestReport report = dimcheck::run_selftest(load(cfg), o);
  std::cout << render_report(report);
  return report.ok() ? kOk : kFailures;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dimension checking for quantities, units and currencies"};
  app.require_subcommand(1);
  app.fallthrough();

  Config cfg;
  app.add_option("--registry", cfg.registry,
                 "Registry file (default: $DIMCHECK_REGISTRY, else built-in units)");
  app.add_option("--precision", cfg.precision, "Significant digits for rounded results")
      ->check(CLI::PositiveNumber);
  app.add_option("--format", cfg.format, "Output format")
      ->check(CLI::IsMember({"plain", "machine"}));

  std::string file;
  std::vector<std::string> sets;
  CLI::App* check = app.add_subcommand("check", "Check a quantity-language file");
  check->add_option("file", file, "Source file")->required();
  check->add_option("--set", sets, "Bind a variable: name=number (in its declared unit)");

  std::string expr;
  std::string in_unit;
  CLI::App* eval = app.add_subcommand("eval", "Evaluate one expression");
  eval->add_option("expr", expr, "Expression")->required();
  eval->add_option("--in", in_unit, "Convert the result to this unit");

  std::string number;
  std::string from;
  std::string to;
  CLI::App* conv = app.add_subcommand("convert", "Convert a value between units");
  conv->add_option("number", number, "Value")->required();
  conv->add_option("from", from, "Unit of the value")->required();
  conv->add_option("to", to, "Target unit")->required();

  CLI::App* units = app.add_subcommand("units", "List registered units");

  std::string scenario;
  std::uint64_t currency_seed = 0;
  bool trace = false;
  CLI::App* cur = app.add_subcommand("currency", "Currency settlement engine");
  cur->require_subcommand(1);
  CLI::App* run = cur->add_subcommand("run", "Run a scenario file");
  run->add_option("scenario", scenario, "Scenario file")->required();
  run->add_option("--seed", currency_seed, "Seed for `random` directives");
  run->add_flag("--trace", trace, "Print a state digest after every event");

  SelftestOptions st_opts;
  CLI::App* self = app.add_subcommand("selftest", "Run the randomized property suite");
  self->add_option("--iterations", st_opts.iterations, "Cases per property")
      ->check(CLI::PositiveNumber);
  self->add_option("--seed", st_opts.seed, "Seed");
  self->add_option("--workers", st_opts.workers, "Worker threads")->check(CLI::PositiveNumber);
  self->add_option("--filter", st_opts.filter, "Only properties with this name prefix");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*check) return run_check(cfg, file, sets);
    if (*eval) return run_eval(cfg, expr, in_unit);
    if (*conv) return run_convert(cfg, number, from, to);
    if (*units) return run_units(cfg);
    if (*run) return run_currency(scenario, currency_seed, trace);
    if (*self) return run_selftest(cfg, st_opts);
  } catch (const InputError& e) {
    std::cerr << "dimcheck: " << e.message << "\n";
    return kUsage;
  } catch (const Error& e) {
    report_error(e);
    if (*eval && !is_input_error(e)) return kFailures;
    return kUsage;
  }
  return kUsage;
}
