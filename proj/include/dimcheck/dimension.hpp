#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace dimcheck {

/// The seven SI base dimensions. The enumerator order is the rendering order.
enum class BaseDimension : std::uint8_t {
  Mass,
  Length,
  Time,
  Temperature,
  Light,
  Current,
  Matter,
};

inline constexpr std::size_t kBaseDimensionCount = 7;

inline constexpr std::array<BaseDimension, kBaseDimensionCount> kBaseDimensions{
    BaseDimension::Mass,  BaseDimension::Length,  BaseDimension::Time,
    BaseDimension::Temperature, BaseDimension::Light, BaseDimension::Current,
    BaseDimension::Matter};

std::string_view base_name(BaseDimension b) noexcept;
/// Rendering symbol: M, L, T, Θ, J, I, N.
std::string_view base_symbol(BaseDimension b) noexcept;
std::optional<BaseDimension> base_from_name(std::string_view name) noexcept;

/// Integer exponent vector over the base dimensions. Forms an abelian group
/// under multiplication with `one()` as identity.
class Dimension {
 public:
  using Exponent = std::int64_t;

  constexpr Dimension() = default;

  static constexpr Dimension one() { return Dimension(); }
  static constexpr Dimension base(BaseDimension b) {
    Dimension d;
    d.exponents_[static_cast<std::size_t>(b)] = 1;
    return d;
  }

  constexpr Exponent operator[](BaseDimension b) const {
    return exponents_[static_cast<std::size_t>(b)];
  }
  constexpr void set(BaseDimension b, Exponent e) {
    exponents_[static_cast<std::size_t>(b)] = e;
  }

  constexpr bool is_one() const { return *this == Dimension(); }

  /// The base dimension when this is exactly one base to the first power.
  std::optional<BaseDimension> single_base() const;

  constexpr Dimension operator*(const Dimension& o) const {
    Dimension r;
    for (std::size_t i = 0; i < kBaseDimensionCount; ++i)
      r.exponents_[i] = exponents_[i] + o.exponents_[i];
    return r;
  }
  constexpr Dimension operator/(const Dimension& o) const {
    return *this * o.reciprocal();
  }
  constexpr Dimension reciprocal() const {
    Dimension r;
    for (std::size_t i = 0; i < kBaseDimensionCount; ++i)
      r.exponents_[i] = -exponents_[i];
    return r;
  }
  constexpr Dimension pow(Exponent n) const {
    Dimension r;
    for (std::size_t i = 0; i < kBaseDimensionCount; ++i)
      r.exponents_[i] = exponents_[i] * n;
    return r;
  }

  constexpr bool operator==(const Dimension&) const = default;
  /// Lexicographic over the exponent vector; only meaningful as a map key.
  constexpr auto operator<=>(const Dimension&) const = default;

 private:
  std::array<Exponent, kBaseDimensionCount> exponents_{};
};

/// `L^1·T^-2`: nonzero exponents in base order, `1` for the identity.
std::string to_string(const Dimension& d);

/// `Mass*Length^2/Time^2`: the textual syntax accepted by parse_dimension.
std::string to_expression(const Dimension& d);

/// Parses `Base ('^' int)?` terms joined by `*` and `/` (left to right), with
/// bases spelled Mass|Length|Time|Temperature|Light|Current|Matter. A lone
/// `1` is the dimensionless identity. Throws ParseError.
Dimension parse_dimension(std::string_view text);

}  // namespace dimcheck
