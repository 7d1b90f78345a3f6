#include <istream>
#include <sstream>
#include <vector>

#include "dimcheck/error.hpp"
#include "dimcheck/measure.hpp"

namespace dimcheck {

namespace {

constexpr std::string_view kDefaultRegistry = R"(# SI canonical units
base Kilogram Mass
base Metre Length
base Second Time
base Kelvin Temperature
base Ampere Current
base Candela Light
base Mole Matter

# lower-case spellings of the canonical units
unit kilogram : Mass scale 1
unit metre : Length scale 1
unit second : Time scale 1
unit kelvin : Temperature scale 1
unit ampere : Current scale 1
unit candela : Light scale 1
unit mole : Matter scale 1

unit gram : Mass scale 1/1000
unit pound : Mass scale 0.45359237

unit centimetre : Length scale 1/100
unit kilometre : Length scale 1000
unit inch : Length scale 0.0254
unit mile : Length scale 1609.344

unit millisecond : Time scale 1/1000
unit decisecond : Time scale 1/10
unit minute : Time scale 60
unit hour : Time scale 3600

unit celsius : Temperature scale 1 offset 273.15
unit fahrenheit : Temperature scale 5/9 offset 45967/180

derive mps = Metre / Second
derive kph = kilometre / hour
derive mph = mile / hour
derive ipms = inch / millisecond
)";

std::vector<std::string> split_words(std::string_view line) {
  std::vector<std::string> words;
  std::istringstream in{std::string(line)};
  for (std::string w; in >> w;) words.push_back(std::move(w));
  return words;
}

void apply_line(UnitRegistry& reg, std::string_view line,
                const std::string& where) {
  const auto fail = [&](const std::string& what) {
    return RegistryFormat(where + ": " + what);
  };
  const auto words = split_words(line);
  if (words.empty()) return;
  const std::string& keyword = words[0];

  if (keyword == "base") {
    if (words.size() != 3) throw fail("expected 'base <Name> <BaseDimension>'");
    const auto base = base_from_name(words[2]);
    if (!base) throw fail("unknown base dimension '" + words[2] + "'");
    reg.declare_base(words[1], *base);
    return;
  }

  if (keyword == "unit") {
    // unit <name> : <dimension-expr> scale <rational> [offset <rational>]
    if (words.size() < 6 || words[2] != ":")
      throw fail("expected 'unit <name> : <dimension> scale <rational>'");
    std::size_t i = 3;
    std::string dim_text;
    while (i < words.size() && words[i] != "scale") dim_text += words[i++] + " ";
    if (i + 1 >= words.size()) throw fail("missing 'scale <rational>'");
    const Dimension dim = parse_dimension(dim_text);
    const Rational scale = Rational::parse(words[i + 1]);
    i += 2;
    Rational offset = 0;
    if (i < words.size()) {
      if (words[i] != "offset" || i + 2 != words.size())
        throw fail("expected 'offset <rational>' at end of line");
      offset = Rational::parse(words[i + 1]);
    }
    reg.register_unit(words[1], dim, scale, offset);
    return;
  }

  if (keyword == "derive") {
    // derive <name> = <unit> {('*'|'/') <unit>}
    if (words.size() < 4 || words[2] != "=")
      throw fail("expected 'derive <name> = <unit> {* or / <unit>}'");
    std::string rest;
    for (std::size_t i = 3; i < words.size(); ++i) rest += words[i];
    std::vector<Unit> num;
    std::vector<Unit> den;
    bool up = true;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= rest.size(); ++i) {
      if (i < rest.size() && rest[i] != '*' && rest[i] != '/') continue;
      const std::string name = rest.substr(start, i - start);
      if (name.empty()) throw fail("missing unit name in derive");
      (up ? num : den).push_back(reg.get(name));
      if (i < rest.size()) up = rest[i] == '*';
      start = i + 1;
    }
    reg.derive_unit(words[1], num, den);
    return;
  }

  throw fail("unknown declaration '" + keyword + "'");
}

}  // namespace

void load_registry(UnitRegistry& reg, std::istream& in,
                   std::string_view source) {
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (const auto hash = line.find('#'); hash != std::string::npos)
      line.erase(hash);
    const std::string where = std::string(source) + ":" + std::to_string(number);
    try {
      apply_line(reg, line, where);
    } catch (const RegistryFormat&) {
      throw;
    } catch (const Error& e) {
      throw RegistryFormat(where + ": " + std::string(kind_name(e.kind())) +
                           ": " + e.what());
    }
  }
}

void load_registry_text(UnitRegistry& reg, std::string_view text,
                        std::string_view source) {
  std::istringstream in{std::string(text)};
  load_registry(reg, in, source);
}

std::string render_registry(const UnitRegistry& reg) {
  std::string out;
  for (const Unit& u : reg.units()) {
    if (u.canonical) {
      if (const auto base = u.dimension.single_base()) {
        out += "base " + u.name + " " + std::string(base_name(*base)) + "\n";
        continue;
      }
    }
    out += "unit " + u.name + " : " + to_expression(u.dimension) + " scale " +
           u.scale.to_string();
    if (u.is_affine()) out += " offset " + u.offset.to_string();
    out += "\n";
  }
  return out;
}

std::string_view default_registry_text() { return kDefaultRegistry; }

UnitRegistry default_registry() {
  UnitRegistry reg = UnitRegistry::standard();
  load_registry_text(reg, kDefaultRegistry, "<built-in>");
  return reg;
}

}  // namespace dimcheck
