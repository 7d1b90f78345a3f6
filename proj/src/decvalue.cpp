#include "dimcheck/decvalue.hpp"

#include <algorithm>
#include <stdexcept>
#include <utility>

#include "dimcheck/detail/literal.hpp"
#include "dimcheck/error.hpp"

namespace dimcheck {

namespace {

using boost::multiprecision::divide_qr;

// Strips trailing zeros from a nonzero significand, adding them to `power`.
void strip_trailing_zeros(BigInt& significand, std::int64_t& power) {
  // An odd significand has no factor of ten.
  if (bit_test(significand, 0)) return;
  // Long runs come from values padded for division.
  while (significand % 100000000u == 0) {
    significand /= 100000000u;
    power += 8;
  }
  while (significand % 10u == 0) {
    significand /= 10u;
    power += 1;
  }
}

// Builds the normal form of significand * 10^power, rounding to
// `digits` significant digits (0 = exact). `sticky` records that nonzero
// digits were already discarded below the last digit of `significand`.
DecValue normalize(BigInt significand, std::int64_t power, int digits,
                   bool sticky = false) {
  if (significand.is_zero()) return DecValue();
  const bool negative = significand.sign() < 0;
  if (negative) significand = -significand;

  if (digits > 0) {
    const std::size_t have = decimal_digits(significand);
    const auto want = static_cast<std::size_t>(digits);
    if (have > want) {
      const std::size_t drop = have - want;
      BigInt q, r;
      divide_qr(significand, pow10(drop), q, r);
      const BigInt half = 5 * pow10(drop - 1);
      bool up = false;
      if (r > half) {
        up = true;
      } else if (r == half) {
        up = sticky || bit_test(q, 0);
      }
      significand = std::move(q);
      if (up) significand += 1;
      power += static_cast<std::int64_t>(drop);
    }
  }

  strip_trailing_zeros(significand, power);
  if (negative) significand = -significand;
  const std::int64_t exponent =
      power + static_cast<std::int64_t>(decimal_digits(significand)) - 1;
  return DecValue::make_float(std::move(significand), exponent);
}

// Rounds num / den * 10^power. `den` must be positive.
DecValue round_quotient(const BigInt& num, const BigInt& den,
                        std::int64_t power, int digits) {
  if (num.is_zero()) return DecValue();
  const bool negative = num.sign() < 0;
  const BigInt n = negative ? BigInt(-num) : num;

  // Scale so the integer quotient carries at least digits + 1 digits; the
  // remainder then acts as a sticky bit below the rounding digit.
  const auto nd = static_cast<std::int64_t>(decimal_digits(n));
  const auto dd = static_cast<std::int64_t>(decimal_digits(den));
  const std::int64_t shift = static_cast<std::int64_t>(digits) + 2 - (nd - dd);
  BigInt q, r;
  if (shift >= 0) {
    divide_qr(BigInt(n * pow10(static_cast<std::size_t>(shift))), den, q, r);
  } else {
    divide_qr(n, BigInt(den * pow10(static_cast<std::size_t>(-shift))), q, r);
  }
  if (negative) q = -q;
  return normalize(std::move(q), power - shift, digits, !r.is_zero());
}

}  // namespace

PrecisionContext::PrecisionContext(int significant_digits)
    : digits_(significant_digits) {
  if (significant_digits < 1)
    throw std::invalid_argument("precision must be at least one digit");
}

DecValue DecValue::make_float(BigInt significand, std::int64_t exponent) {
  DecValue v;
  if (significand.is_zero()) return v;
  // Trailing zeros leave the lead-digit exponent unchanged.
  std::int64_t ignored = 0;
  strip_trailing_zeros(significand, ignored);
  if (exponent > kMaxExponent || exponent < kMinExponent)
    throw ExponentOverflow("decimal exponent " + std::to_string(exponent) +
                           " out of range");
  v.significand_ = std::move(significand);
  v.exponent_ = exponent;
  return v;
}

DecValue DecValue::from_integer(const BigInt& value) {
  return normalize(value, 0, 0);
}

DecValue DecValue::scaled(BigInt significand, std::int64_t power) {
  return normalize(std::move(significand), power, 0);
}

std::int64_t DecValue::integer_exponent() const {
  return exponent_ - static_cast<std::int64_t>(digits()) + 1;
}

std::size_t DecValue::digits() const { return decimal_digits(significand_); }

DecValue round(const DecValue& a, const PrecisionContext& ctx) {
  return normalize(a.significand(), a.integer_exponent(),
                   ctx.significant_digits());
}

DecValue add(const DecValue& a, const DecValue& b, const PrecisionContext& ctx) {
  const int p = ctx.significant_digits();
  if (a.is_zero()) return round(b, ctx);
  if (b.is_zero()) return round(a, ctx);

  const DecValue& big = a.exponent() >= b.exponent() ? a : b;
  const DecValue& small = a.exponent() >= b.exponent() ? b : a;

  BigInt big_sig = big.significand();
  const std::int64_t big_pow = big.integer_exponent();
  BigInt small_sig = small.significand();
  std::int64_t small_pow = small.integer_exponent();

  // An addend lying wholly below both the larger operand's last digit and the
  // rounding position only matters through its sign; replace it by a single
  // digit there so huge exponent gaps never materialize huge integers.
  const std::int64_t floor_pos = std::min(big_pow, big.exponent() - p);
  if (small.exponent() <= floor_pos - 2) {
    small_sig = small.sign();
    small_pow = floor_pos - 2;
  }

  const std::int64_t base = std::min(big_pow, small_pow);
  BigInt sum = big_sig * pow10(static_cast<std::size_t>(big_pow - base)) +
               small_sig * pow10(static_cast<std::size_t>(small_pow - base));
  return normalize(std::move(sum), base, p);
}

DecValue subtract(const DecValue& a, const DecValue& b,
                  const PrecisionContext& ctx) {
  return add(a, negate(b), ctx);
}

DecValue multiply(const DecValue& a, const DecValue& b,
                  const PrecisionContext& ctx) {
  if (a.is_zero() || b.is_zero()) return DecValue();
  return normalize(a.significand() * b.significand(),
                   a.integer_exponent() + b.integer_exponent(),
                   ctx.significant_digits());
}

DecValue divide(const DecValue& a, const DecValue& b,
                const PrecisionContext& ctx) {
  if (b.is_zero()) throw DivisionByZero("decimal division by zero");
  BigInt num = a.significand();
  BigInt den = b.significand();
  if (den.sign() < 0) {
    num = -num;
    den = -den;
  }
  return round_quotient(num, den, a.integer_exponent() - b.integer_exponent(),
                        ctx.significant_digits());
}

DecValue multiply(const DecValue& a, const Rational& r, const PrecisionContext& ctx) {
  return round_quotient(a.significand() * r.numerator(), r.denominator(),
                        a.integer_exponent(), ctx.significant_digits());
}

DecValue negate(const DecValue& a) {
  if (a.is_zero()) return a;
  return DecValue::make_float(-a.significand(), a.exponent());
}

DecValue absolute(const DecValue& a) { return a.sign() < 0 ? negate(a) : a; }

std::strong_ordering compare(const DecValue& a, const DecValue& b) {
  if (a.sign() != b.sign())
    return a.sign() < b.sign() ? std::strong_ordering::less
                               : std::strong_ordering::greater;
  if (a.is_zero()) return std::strong_ordering::equal;

  // Same nonzero sign: order magnitudes, then flip for negatives.
  std::strong_ordering mag = std::strong_ordering::equal;
  if (a.exponent() != b.exponent()) {
    mag = a.exponent() < b.exponent() ? std::strong_ordering::less
                                      : std::strong_ordering::greater;
  } else {
    // Equal lead-digit exponents: pad the shorter significand and compare.
    BigInt x = abs(a.significand());
    BigInt y = abs(b.significand());
    const std::size_t dx = a.digits();
    const std::size_t dy = b.digits();
    if (dx < dy) x *= pow10(dy - dx);
    if (dy < dx) y *= pow10(dx - dy);
    const int c = x.compare(y);
    mag = c < 0 ? std::strong_ordering::less
          : c > 0 ? std::strong_ordering::greater
                  : std::strong_ordering::equal;
  }
  if (a.sign() > 0) return mag;
  return 0 <=> mag;
}

Rational to_rational(const DecValue& a) {
  const std::int64_t power = a.integer_exponent();
  if (power >= 0)
    return Rational(a.significand() * pow10(static_cast<std::size_t>(power)), 1);
  return Rational(a.significand(), pow10(static_cast<std::size_t>(-power)));
}

DecValue from_rational(const Rational& r, const PrecisionContext& ctx) {
  return round_quotient(r.numerator(), r.denominator(), 0,
                        ctx.significant_digits());
}

DecValue parse_decimal(std::string_view text) {
  auto lit = detail::scan_decimal_literal(text);
  return DecValue::scaled(std::move(lit.digits), lit.power);
}

std::string to_string(const DecValue& a) {
  if (a.is_zero()) return "0";
  const std::string digits = BigInt(abs(a.significand())).str();
  const std::string sign = a.sign() < 0 ? "-" : "";
  const std::int64_t e = a.exponent();
  const auto n = static_cast<std::int64_t>(digits.size());

  std::string scientific = sign + digits.substr(0, 1);
  if (n > 1) scientific += "." + digits.substr(1);
  if (e != 0) scientific += "e" + std::to_string(e);

  // Plain notation is only considered when it stays reasonably short.
  if (e > 64 || e < -64) return scientific;
  std::string plain = sign;
  if (e >= n - 1) {
    plain += digits + std::string(static_cast<std::size_t>(e - n + 1), '0');
  } else if (e >= 0) {
    plain += digits.substr(0, static_cast<std::size_t>(e + 1)) + "." +
             digits.substr(static_cast<std::size_t>(e + 1));
  } else {
    plain += "0." + std::string(static_cast<std::size_t>(-e - 1), '0') + digits;
  }
  return plain.size() <= scientific.size() ? plain : scientific;
}

DecValue ulp(const DecValue& a, const PrecisionContext& ctx) {
  return DecValue::make_float(1, a.exponent() - ctx.significant_digits() + 1);
}

}  // namespace dimcheck
