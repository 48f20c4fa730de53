#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace lauricella {

enum class Errc {
  VarTableMismatch,
  InexactDivision,
  NotACoordinate,
  DivisionByZeroFunction,
  SubstitutionPole,
  PoleAtPoint,
  SyntaxError,
  UnknownVariable,
  InvalidDimension,
  WrongForm,
  MissingZerothOrder,
  Underdetermined,
  Inconsistent,
  ShapeMismatch,
  ConditionFailure,
  SingularJacobian,
  ClosureFailure,
  DenominatorVanishes,
  DegenerateConfiguration,
  NonSquareDiscriminant,
  DegenerateZ,
  ConvergenceGuard,
  InvalidC,
  ResidualBelowOrder,
  QuadratureNonConvergent,
  UnknownClaimId,
  BudgetExceeded,
  ParseError,
  InvalidArgument,
};

constexpr std::string_view errc_name(Errc e) {
  switch (e) {
    case Errc::VarTableMismatch: return "VarTableMismatch";
    case Errc::InexactDivision: return "InexactDivision";
    case Errc::NotACoordinate: return "NotACoordinate";
    case Errc::DivisionByZeroFunction: return "DivisionByZeroFunction";
    case Errc::SubstitutionPole: return "SubstitutionPole";
    case Errc::PoleAtPoint: return "PoleAtPoint";
    case Errc::SyntaxError: return "SyntaxError";
    case Errc::UnknownVariable: return "UnknownVariable";
    case Errc::InvalidDimension: return "InvalidDimension";
    case Errc::WrongForm: return "WrongForm";
    case Errc::MissingZerothOrder: return "MissingZerothOrder";
    case Errc::Underdetermined: return "Underdetermined";
    case Errc::Inconsistent: return "Inconsistent";
    case Errc::ShapeMismatch: return "ShapeMismatch";
    case Errc::ConditionFailure: return "ConditionFailure";
    case Errc::SingularJacobian: return "SingularJacobian";
    case Errc::ClosureFailure: return "ClosureFailure";
    case Errc::DenominatorVanishes: return "DenominatorVanishes";
    case Errc::DegenerateConfiguration: return "DegenerateConfiguration";
    case Errc::NonSquareDiscriminant: return "NonSquareDiscriminant";
    case Errc::DegenerateZ: return "DegenerateZ";
    case Errc::ConvergenceGuard: return "ConvergenceGuard";
    case Errc::InvalidC: return "InvalidC";
    case Errc::ResidualBelowOrder: return "ResidualBelowOrder";
    case Errc::QuadratureNonConvergent: return "QuadratureNonConvergent";
    case Errc::UnknownClaimId: return "UnknownClaimId";
    case Errc::BudgetExceeded: return "BudgetExceeded";
    case Errc::ParseError: return "ParseError";
    case Errc::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

/// Every failure raised by the library carries one of the codes above.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

/// SyntaxError with the byte offset where parsing stopped.
class SyntaxError : public Error {
 public:
  SyntaxError(std::size_t position, const std::string& what)
      : Error(Errc::SyntaxError, what + " at position " + std::to_string(position)),
        position_(position) {}

  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

}  // namespace lauricella
