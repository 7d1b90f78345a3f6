#include "dimcheck/error.hpp"

namespace dimcheck {

std::string_view kind_name(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::ExponentOverflow: return "ExponentOverflow";
    case ErrorKind::DivisionByZero: return "DivisionByZero";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::LexError: return "LexError";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::DuplicateName: return "DuplicateName";
    case ErrorKind::InvalidScale: return "InvalidScale";
    case ErrorKind::AffineCompositeRejected: return "AffineCompositeRejected";
    case ErrorKind::UnknownUnit: return "UnknownUnit";
    case ErrorKind::UnknownName: return "UnknownName";
    case ErrorKind::Redeclaration: return "Redeclaration";
    case ErrorKind::UnboundVariable: return "UnboundVariable";
    case ErrorKind::AssertionFailed: return "AssertionFailed";
    case ErrorKind::GuardFailed: return "GuardFailed";
    case ErrorKind::IncompleteTariff: return "IncompleteTariff";
    case ErrorKind::ClockRegression: return "ClockRegression";
    case ErrorKind::InvalidRate: return "InvalidRate";
    case ErrorKind::CurrencyMismatch: return "CurrencyMismatch";
    case ErrorKind::RegistryFormat: return "RegistryFormat";
  }
  return "Error";
}

}  // namespace dimcheck
