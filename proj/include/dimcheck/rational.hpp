#pragma once

#include <compare>
#include <string>
#include <string_view>

#include <boost/multiprecision/cpp_int.hpp>

namespace dimcheck {

using BigInt = boost::multiprecision::cpp_int;

/// Exact fraction in lowest terms with a positive denominator.
///
/// Used for unit scale factors and offsets (5/9, 45967/180, ...) and for
/// carrying conversions exactly until the single final rounding.
class Rational {
 public:
  Rational() = default;
  Rational(long long value) : value_(value) {}  // NOLINT: implicit by design of literals
  Rational(BigInt numerator, BigInt denominator);

  /// Accepts `p/q`, signed integers and decimal literals (`0.45359237`,
  /// `1.5e-3`); decimals are converted exactly.
  static Rational parse(std::string_view text);

  BigInt numerator() const;
  BigInt denominator() const;

  int sign() const { return value_.sign(); }
  bool is_zero() const { return value_.is_zero(); }

  /// `p` for integers, `p/q` otherwise.
  std::string to_string() const;

  Rational operator-() const;
  Rational reciprocal() const;

  friend Rational operator+(const Rational& a, const Rational& b);
  friend Rational operator-(const Rational& a, const Rational& b);
  friend Rational operator*(const Rational& a, const Rational& b);
  friend Rational operator/(const Rational& a, const Rational& b);

  Rational& operator+=(const Rational& b) { return *this = *this + b; }
  Rational& operator-=(const Rational& b) { return *this = *this - b; }
  Rational& operator*=(const Rational& b) { return *this = *this * b; }
  Rational& operator/=(const Rational& b) { return *this = *this / b; }

  friend bool operator==(const Rational& a, const Rational& b) {
    return a.value_ == b.value_;
  }
  friend std::strong_ordering operator<=>(const Rational& a,
                                          const Rational& b);

 private:
  using Backend = boost::multiprecision::cpp_rational;
  explicit Rational(Backend value) : value_(std::move(value)) {}

  Backend value_;
};

/// 10^n; small powers come from a table.
BigInt pow10(std::size_t n);

/// Number of decimal digits of |value|; 1 for zero.
std::size_t decimal_digits(const BigInt& value);

}  // namespace dimcheck
