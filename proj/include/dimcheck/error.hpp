#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace dimcheck {

enum class ErrorKind {
  ExponentOverflow,
  DivisionByZero,
  ParseError,
  LexError,
  DimensionMismatch,
  DuplicateName,
  InvalidScale,
  AffineCompositeRejected,
  UnknownUnit,
  UnknownName,
  Redeclaration,
  UnboundVariable,
  AssertionFailed,
  GuardFailed,
  IncompleteTariff,
  ClockRegression,
  InvalidRate,
  CurrencyMismatch,
  RegistryFormat,
};

std::string_view kind_name(ErrorKind kind) noexcept;

/// Base of every error raised by the library. The kind is stable and is what
/// diagnostics print; the message is free text.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

#define DIMCHECK_DEFINE_ERROR(Name)                                    \
  class Name : public Error {                                          \
   public:                                                             \
    explicit Name(const std::string& message)                          \
        : Error(ErrorKind::Name, message) {}                           \
  };

DIMCHECK_DEFINE_ERROR(ExponentOverflow)
DIMCHECK_DEFINE_ERROR(DivisionByZero)
DIMCHECK_DEFINE_ERROR(DimensionMismatch)
DIMCHECK_DEFINE_ERROR(DuplicateName)
DIMCHECK_DEFINE_ERROR(InvalidScale)
DIMCHECK_DEFINE_ERROR(AffineCompositeRejected)
DIMCHECK_DEFINE_ERROR(UnknownUnit)
DIMCHECK_DEFINE_ERROR(UnknownName)
DIMCHECK_DEFINE_ERROR(Redeclaration)
DIMCHECK_DEFINE_ERROR(UnboundVariable)
DIMCHECK_DEFINE_ERROR(AssertionFailed)
DIMCHECK_DEFINE_ERROR(GuardFailed)
DIMCHECK_DEFINE_ERROR(IncompleteTariff)
DIMCHECK_DEFINE_ERROR(ClockRegression)
DIMCHECK_DEFINE_ERROR(InvalidRate)
DIMCHECK_DEFINE_ERROR(CurrencyMismatch)
DIMCHECK_DEFINE_ERROR(RegistryFormat)

#undef DIMCHECK_DEFINE_ERROR

/// Malformed text. `position` is a 0-based offset into the parsed string.
class ParseError : public Error {
 public:
  ParseError(const std::string& message, std::size_t position)
      : Error(ErrorKind::ParseError, message), position_(position) {}

  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

/// Illegal character or malformed number in language source, at a 1-based
/// line and column.
class LexError : public Error {
 public:
  LexError(const std::string& message, int line, int column)
      : Error(ErrorKind::LexError, message), line_(line), column_(column) {}

  int line() const noexcept { return line_; }
  int column() const noexcept { return column_; }

 private:
  int line_;
  int column_;
};

}  // namespace dimcheck
