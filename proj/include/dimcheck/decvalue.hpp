#pragma once

#include <compare>
#include <cstdint>
#include <limits>
#include <string>
#include <string_view>

#include "dimcheck/rational.hpp"

namespace dimcheck {

/// Working precision for rounded decimal operations. Rounding is always
/// round-half-even.
class PrecisionContext {
 public:
  static constexpr int kDefaultDigits = 34;

  PrecisionContext() = default;
  explicit PrecisionContext(int significant_digits);

  int significant_digits() const noexcept { return digits_; }

 private:
  int digits_ = kDefaultDigits;
};

/// Exact decimal number: a significand read with the decimal point after its
/// first digit, times a power of ten.
///
///   make_float(314159, 0)  ==  3.14159
///   make_float(1, 1)       ==  10
///
/// Values are kept in normal form: zero is (0, 0); any other significand has
/// no trailing decimal zeros. Two values denote the same real number iff their
/// fields are equal, so the defaulted operator== is numeric equality.
class DecValue {
 public:
  static constexpr std::int64_t kMaxExponent =
      std::numeric_limits<std::int32_t>::max();
  static constexpr std::int64_t kMinExponent =
      std::numeric_limits<std::int32_t>::min();

  DecValue() = default;

  /// Throws ExponentOverflow when the normalized exponent leaves the
  /// 32-bit range.
  static DecValue make_float(BigInt significand, std::int64_t exponent);

  static DecValue from_integer(const BigInt& value);

  /// Builds `significand * 10^power` (plain scaling, no lead-digit reading).
  static DecValue scaled(BigInt significand, std::int64_t power);

  const BigInt& significand() const noexcept { return significand_; }
  /// Power of ten applied to the lead-digit reading of the significand.
  std::int64_t exponent() const noexcept { return exponent_; }
  /// Power of ten applied to the significand read as an integer.
  std::int64_t integer_exponent() const;
  std::size_t digits() const;

  int sign() const { return significand_.sign(); }
  bool is_zero() const { return significand_.is_zero(); }

  friend bool operator==(const DecValue&, const DecValue&) = default;

 private:
  BigInt significand_;
  std::int64_t exponent_ = 0;
};

DecValue add(const DecValue& a, const DecValue& b,
             const PrecisionContext& ctx = {});
DecValue subtract(const DecValue& a, const DecValue& b,
                  const PrecisionContext& ctx = {});
DecValue multiply(const DecValue& a, const DecValue& b,
                  const PrecisionContext& ctx = {});
/// a * r, rounded once.
DecValue multiply(const DecValue& a, const Rational& r,
                  const PrecisionContext& ctx = {});
/// Throws DivisionByZero.
DecValue divide(const DecValue& a, const DecValue& b,
                const PrecisionContext& ctx = {});
DecValue negate(const DecValue& a);
DecValue absolute(const DecValue& a);

/// Rounds `a` to the context precision.
DecValue round(const DecValue& a, const PrecisionContext& ctx);

std::strong_ordering compare(const DecValue& a, const DecValue& b);

inline std::strong_ordering operator<=>(const DecValue& a, const DecValue& b) {
  return compare(a, b);
}

Rational to_rational(const DecValue& a);
DecValue from_rational(const Rational& r, const PrecisionContext& ctx = {});

/// Parses `['-'] digits ['.' digits] [('e'|'E') ['-'] digits]` exactly.
/// Throws ParseError carrying the offending offset.
DecValue parse_decimal(std::string_view text);

/// Shortest text that parses back to the same value.
std::string to_string(const DecValue& a);

/// One unit in the last place of `a` at the context precision, i.e.
/// 10^(exponent - digits + 1). For zero this is 10^(1 - digits).
DecValue ulp(const DecValue& a, const PrecisionContext& ctx);

}  // namespace dimcheck
