#include "dimcheck/rational.hpp"

#include <array>
#include <cctype>
#include <cmath>

#include "dimcheck/detail/literal.hpp"
#include "dimcheck/error.hpp"

namespace dimcheck {

namespace {

constexpr std::size_t kPow10TableSize = 512;

const std::array<BigInt, kPow10TableSize>& pow10_table() {
  static const auto table = [] {
    std::array<BigInt, kPow10TableSize> t;
    t[0] = 1;
    for (std::size_t i = 1; i < t.size(); ++i) t[i] = t[i - 1] * 10;
    return t;
  }();
  return table;
}

bool is_digit(char c) { return c >= '0' && c <= '9'; }

// Accumulates a run of decimal digits into a big integer, 18 at a time.
BigInt digits_to_int(std::string_view digits) {
  BigInt value = 0;
  std::size_t i = 0;
  while (i < digits.size()) {
    const std::size_t n = std::min<std::size_t>(18, digits.size() - i);
    std::uint64_t chunk = 0;
    for (std::size_t k = 0; k < n; ++k)
      chunk = chunk * 10 + static_cast<std::uint64_t>(digits[i + k] - '0');
    value = value * pow10(n) + chunk;
    i += n;
  }
  return value;
}

}  // namespace

BigInt pow10(std::size_t n) {
  if (n < kPow10TableSize) return pow10_table()[n];
  return boost::multiprecision::pow(BigInt(10), static_cast<unsigned>(n));
}

std::size_t decimal_digits(const BigInt& value) {
  if (value.is_zero()) return 1;
  const BigInt magnitude = abs(value);
  const std::size_t bits = boost::multiprecision::msb(magnitude) + 1;
  // floor((bits - 1) * log10(2)) + 1 never exceeds the true digit count and
  // undershoots it by at most one.
  auto estimate = static_cast<std::size_t>(
                      std::floor(static_cast<double>(bits - 1) * 0.30102999566398120)) +
                  1;
  if (estimate > 1 && magnitude < pow10(estimate - 1)) --estimate;
  while (magnitude >= pow10(estimate)) ++estimate;
  return estimate;
}

namespace detail {

DecimalLiteral scan_decimal_literal(std::string_view text, std::size_t offset) {
  std::size_t i = 0;
  const auto fail = [&](const char* what) -> ParseError {
    return ParseError(std::string(what) + " in decimal literal '" +
                          std::string(text) + "'",
                      offset + i);
  };

  bool negative = false;
  if (i < text.size() && text[i] == '-') {
    negative = true;
    ++i;
  }
  const std::size_t int_begin = i;
  while (i < text.size() && is_digit(text[i])) ++i;
  if (i == int_begin) throw fail("expected digit");
  std::string digits(text.substr(int_begin, i - int_begin));

  std::int64_t power = 0;
  if (i < text.size() && text[i] == '.') {
    ++i;
    const std::size_t frac_begin = i;
    while (i < text.size() && is_digit(text[i])) ++i;
    if (i == frac_begin) throw fail("expected digit after '.'");
    digits.append(text.substr(frac_begin, i - frac_begin));
    power = -static_cast<std::int64_t>(i - frac_begin);
  }

  if (i < text.size() && (text[i] == 'e' || text[i] == 'E')) {
    ++i;
    bool exp_negative = false;
    if (i < text.size() && text[i] == '-') {
      exp_negative = true;
      ++i;
    }
    const std::size_t exp_begin = i;
    std::int64_t exponent = 0;
    while (i < text.size() && is_digit(text[i])) {
      if (exponent > (std::int64_t{1} << 40))
        throw ExponentOverflow("exponent out of range in '" +
                               std::string(text) + "'");
      exponent = exponent * 10 + (text[i] - '0');
      ++i;
    }
    if (i == exp_begin) throw fail("expected digit in exponent");
    power += exp_negative ? -exponent : exponent;
  }
  if (i != text.size()) throw fail("unexpected character");

  DecimalLiteral lit;
  lit.digits = digits_to_int(digits);
  if (negative) lit.digits = -lit.digits;
  lit.power = power;
  return lit;
}

}  // namespace detail

Rational::Rational(BigInt numerator, BigInt denominator) {
  if (denominator.is_zero()) throw DivisionByZero("rational with zero denominator");
  value_ = Backend(std::move(numerator), std::move(denominator));
}

Rational Rational::parse(std::string_view text) {
  const auto from_literal = [](std::string_view part, std::size_t offset) {
    const auto lit = detail::scan_decimal_literal(part, offset);
    if (lit.power >= 0)
      return Rational(lit.digits * pow10(static_cast<std::size_t>(lit.power)), 1);
    return Rational(lit.digits, pow10(static_cast<std::size_t>(-lit.power)));
  };

  const auto slash = text.find('/');
  if (slash == std::string_view::npos) return from_literal(text, 0);
  const Rational num = from_literal(text.substr(0, slash), 0);
  const Rational den = from_literal(text.substr(slash + 1), slash + 1);
  if (den.is_zero()) throw DivisionByZero("zero denominator in '" + std::string(text) + "'");
  return num / den;
}

BigInt Rational::numerator() const {
  return boost::multiprecision::numerator(value_);
}

BigInt Rational::denominator() const {
  return boost::multiprecision::denominator(value_);
}

std::string Rational::to_string() const {
  const BigInt den = denominator();
  if (den == 1) return numerator().str();
  return numerator().str() + "/" + den.str();
}

Rational Rational::operator-() const { return Rational(Backend(-value_)); }

Rational Rational::reciprocal() const {
  if (is_zero()) throw DivisionByZero("reciprocal of zero");
  return Rational(Backend(1 / value_));
}

Rational operator+(const Rational& a, const Rational& b) {
  return Rational(Rational::Backend(a.value_ + b.value_));
}
Rational operator-(const Rational& a, const Rational& b) {
  return Rational(Rational::Backend(a.value_ - b.value_));
}
Rational operator*(const Rational& a, const Rational& b) {
  return Rational(Rational::Backend(a.value_ * b.value_));
}
Rational operator/(const Rational& a, const Rational& b) {
  if (b.is_zero()) throw DivisionByZero("rational division by zero");
  return Rational(Rational::Backend(a.value_ / b.value_));
}

std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
  const int c = a.value_.compare(b.value_);
  if (c < 0) return std::strong_ordering::less;
  if (c > 0) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

}  // namespace dimcheck
