#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace llab {

enum class ErrorKind {
  NonCoprimeModuli,
  EvenModulus,
  NotPrime,
  ZeroArgument,
  DegenerateQuadratic,
  UnsupportedDegree,
  RangeTooLarge,
  FactorizationMismatch,
  BadModulus,
  ModulusTooLarge,
  PreconditionViolated,
  SearchExhausted,
  WrongResidueClass,
  InsufficientData,
  PerfectSquare,
  SquareDiscriminant,
  DegenerateShifts,
  CostGuard,
  ParseError,
  FormatError,
};

constexpr std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NonCoprimeModuli: return "NonCoprimeModuli";
    case ErrorKind::EvenModulus: return "EvenModulus";
    case ErrorKind::NotPrime: return "NotPrime";
    case ErrorKind::ZeroArgument: return "ZeroArgument";
    case ErrorKind::DegenerateQuadratic: return "DegenerateQuadratic";
    case ErrorKind::UnsupportedDegree: return "UnsupportedDegree";
    case ErrorKind::RangeTooLarge: return "RangeTooLarge";
    case ErrorKind::FactorizationMismatch: return "FactorizationMismatch";
    case ErrorKind::BadModulus: return "BadModulus";
    case ErrorKind::ModulusTooLarge: return "ModulusTooLarge";
    case ErrorKind::PreconditionViolated: return "PreconditionViolated";
    case ErrorKind::SearchExhausted: return "SearchExhausted";
    case ErrorKind::WrongResidueClass: return "WrongResidueClass";
    case ErrorKind::InsufficientData: return "InsufficientData";
    case ErrorKind::PerfectSquare: return "PerfectSquare";
    case ErrorKind::SquareDiscriminant: return "SquareDiscriminant";
    case ErrorKind::DegenerateShifts: return "DegenerateShifts";
    case ErrorKind::CostGuard: return "CostGuard";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::FormatError: return "FormatError";
  }
  return "Unknown";
}

/// Every failure raised by the library carries a machine-checkable kind.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

}  // namespace llab
