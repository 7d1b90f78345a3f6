#include "dimcheck/dimension.hpp"

#include <cctype>

#include "dimcheck/error.hpp"

namespace dimcheck {

namespace {

constexpr std::array<std::string_view, kBaseDimensionCount> kNames{
    "Mass", "Length", "Time", "Temperature", "Light", "Current", "Matter"};
constexpr std::array<std::string_view, kBaseDimensionCount> kSymbols{
    "M", "L", "T", "Θ", "J", "I", "N"};

bool is_space(char c) { return c == ' ' || c == '\t'; }

}  // namespace

std::string_view base_name(BaseDimension b) noexcept {
  return kNames[static_cast<std::size_t>(b)];
}

std::string_view base_symbol(BaseDimension b) noexcept {
  return kSymbols[static_cast<std::size_t>(b)];
}

std::optional<BaseDimension> base_from_name(std::string_view name) noexcept {
  for (BaseDimension b : kBaseDimensions)
    if (base_name(b) == name) return b;
  return std::nullopt;
}

std::optional<BaseDimension> Dimension::single_base() const {
  std::optional<BaseDimension> found;
  for (BaseDimension b : kBaseDimensions) {
    const Exponent e = (*this)[b];
    if (e == 0) continue;
    if (e != 1 || found) return std::nullopt;
    found = b;
  }
  return found;
}

std::string to_string(const Dimension& d) {
  std::string out;
  for (BaseDimension b : kBaseDimensions) {
    const auto e = d[b];
    if (e == 0) continue;
    if (!out.empty()) out += "·";
    out += base_symbol(b);
    out += "^" + std::to_string(e);
  }
  return out.empty() ? "1" : out;
}

std::string to_expression(const Dimension& d) {
  std::string num;
  std::string den;
  for (BaseDimension b : kBaseDimensions) {
    const auto e = d[b];
    if (e == 0) continue;
    std::string term(base_name(b));
    const auto mag = e > 0 ? e : -e;
    if (mag != 1) term += "^" + std::to_string(mag);
    if (e > 0) {
      num += (num.empty() ? "" : "*") + term;
    } else {
      den += "/" + term;
    }
  }
  return (num.empty() ? "1" : num) + den;
}

Dimension parse_dimension(std::string_view text) {
  std::size_t i = 0;
  const auto skip = [&] {
    while (i < text.size() && is_space(text[i])) ++i;
  };
  const auto fail = [&](const std::string& what) {
    return ParseError(what + " in dimension '" + std::string(text) + "'", i);
  };
  const auto term = [&]() -> Dimension {
    skip();
    const std::size_t begin = i;
    if (i < text.size() && text[i] == '1') {
      ++i;
      return Dimension::one();
    }
    while (i < text.size() && std::isalpha(static_cast<unsigned char>(text[i])))
      ++i;
    const auto name = text.substr(begin, i - begin);
    const auto base = base_from_name(name);
    if (!base) {
      i = begin;
      throw fail(name.empty() ? "expected base dimension"
                              : "unknown base dimension '" + std::string(name) + "'");
    }
    Dimension d = Dimension::base(*base);
    skip();
    if (i < text.size() && text[i] == '^') {
      ++i;
      skip();
      bool negative = false;
      if (i < text.size() && text[i] == '-') {
        negative = true;
        ++i;
      }
      const std::size_t digits_begin = i;
      Dimension::Exponent e = 0;
      while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) {
        e = e * 10 + (text[i] - '0');
        if (e > (1 << 30)) throw fail("exponent too large");
        ++i;
      }
      if (i == digits_begin) throw fail("expected integer exponent");
      d = d.pow(negative ? -e : e);
    }
    return d;
  };

  Dimension result = term();
  while (true) {
    skip();
    if (i == text.size()) break;
    const char op = text[i];
    if (op != '*' && op != '/') throw fail("expected '*' or '/'");
    ++i;
    const Dimension rhs = term();
    result = op == '*' ? result * rhs : result / rhs;
  }
  return result;
}

}  // namespace dimcheck
