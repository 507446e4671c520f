#pragma once

#include <stdexcept>
#include <string>

namespace solvharm {

enum class ErrorKind {
  SchemaError,
  InvalidArgument,
  AntisymmetryViolation,
  JacobiViolation,
  NotNilpotentIdeal,
  DNotSymmetricPositive,
  NoCliffordModule,
  EigenvalueSeparation,
  GradingViolation,
  BlockSeparationFailure,
  StepCountTooSmall,
  OrderTooLarge,
  NotRational,
};

inline const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::SchemaError: return "SchemaError";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::AntisymmetryViolation: return "AntisymmetryViolation";
    case ErrorKind::JacobiViolation: return "JacobiViolation";
    case ErrorKind::NotNilpotentIdeal: return "NotNilpotentIdeal";
    case ErrorKind::DNotSymmetricPositive: return "DNotSymmetricPositive";
    case ErrorKind::NoCliffordModule: return "NoCliffordModule";
    case ErrorKind::EigenvalueSeparation: return "EigenvalueSeparation";
    case ErrorKind::GradingViolation: return "GradingViolation";
    case ErrorKind::BlockSeparationFailure: return "BlockSeparationFailure";
    case ErrorKind::StepCountTooSmall: return "StepCountTooSmall";
    case ErrorKind::OrderTooLarge: return "OrderTooLarge";
    case ErrorKind::NotRational: return "NotRational";
  }
  return "Unknown";
}

/// Every failure raised by the library carries one of the kinds above; the
/// message names the offending index, triple or parameter.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& detail)
      : std::runtime_error(std::string(to_string(kind)) + ": " + detail), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace solvharm
