#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace rescale {

enum class ErrorKind {
  InvalidValue,
  NotOnLattice,
  MissingPoint,
  OutOfRange,
  Overflow,
  DomainError,
  DomainEscape,
  TruncationError,
  NonPositiveLeadingCoeff,
  DegenerateDenominator,
  NonPositiveX,
  SingularFit,
  DegenerateReference,
  DimensionGuard,
  EigensolverFailure,
  ParseError,
  UnknownSelector,
};

constexpr std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::InvalidValue: return "InvalidValue";
    case ErrorKind::NotOnLattice: return "NotOnLattice";
    case ErrorKind::MissingPoint: return "MissingPoint";
    case ErrorKind::OutOfRange: return "OutOfRange";
    case ErrorKind::Overflow: return "Overflow";
    case ErrorKind::DomainError: return "DomainError";
    case ErrorKind::DomainEscape: return "DomainEscape";
    case ErrorKind::TruncationError: return "TruncationError";
    case ErrorKind::NonPositiveLeadingCoeff: return "NonPositiveLeadingCoeff";
    case ErrorKind::DegenerateDenominator: return "DegenerateDenominator";
    case ErrorKind::NonPositiveX: return "NonPositiveX";
    case ErrorKind::SingularFit: return "SingularFit";
    case ErrorKind::DegenerateReference: return "DegenerateReference";
    case ErrorKind::DimensionGuard: return "DimensionGuard";
    case ErrorKind::EigensolverFailure: return "EigensolverFailure";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::UnknownSelector: return "UnknownSelector";
  }
  return "Unknown";
}

/// Every failure raised by the library. The kind is stable and machine-readable;
/// the message is for humans.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace rescale
