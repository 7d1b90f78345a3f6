#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>

#include "dimcheck/rational.hpp"

namespace dimcheck::detail {

/// `digits * 10^power`, exactly as written.
struct DecimalLiteral {
  BigInt digits;
  std::int64_t power = 0;
};

/// Scans the whole of `text` as `['-'] digits ['.' digits] [('e'|'E') ['-']
/// digits]`. Error positions are reported relative to `text` plus `offset`.
DecimalLiteral scan_decimal_literal(std::string_view text,
                                    std::size_t offset = 0);

}  // namespace dimcheck::detail
