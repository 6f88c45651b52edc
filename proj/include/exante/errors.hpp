#pragma once

#include <stdexcept>
#include <string>

namespace exante {

// Every failure the library reports carries one of these codes. The CLI maps
// them onto exit codes: input problems -> 2, numerical trouble -> 3,
// everything else -> 1.
enum class ErrorCode {
  ProbabilitySum,
  DistributionSum,
  PerfectRecallViolation,
  InfosetMismatch,
  TooManyReceivers,
  MalformedTree,
  PlanExplosion,
  StateExplosion,
  DenseCapExceeded,
  NumericalFailure,
  IterationLimit,
  OracleInconsistent,
  ReconstructionResidual,
  InfeasiblePath,
  RowSumViolation,
  MalformedScheme,
  ParseError,
};

inline const char* error_code_name(ErrorCode c) {
  switch (c) {
    case ErrorCode::ProbabilitySum: return "ProbabilitySum";
    case ErrorCode::DistributionSum: return "DistributionSum";
    case ErrorCode::PerfectRecallViolation: return "PerfectRecallViolation";
    case ErrorCode::InfosetMismatch: return "InfosetMismatch";
    case ErrorCode::TooManyReceivers: return "TooManyReceivers";
    case ErrorCode::MalformedTree: return "MalformedTree";
    case ErrorCode::PlanExplosion: return "PlanExplosion";
    case ErrorCode::StateExplosion: return "StateExplosion";
    case ErrorCode::DenseCapExceeded: return "DenseCapExceeded";
    case ErrorCode::NumericalFailure: return "NumericalFailure";
    case ErrorCode::IterationLimit: return "IterationLimit";
    case ErrorCode::OracleInconsistent: return "OracleInconsistent";
    case ErrorCode::ReconstructionResidual: return "ReconstructionResidual";
    case ErrorCode::InfeasiblePath: return "InfeasiblePath";
    case ErrorCode::RowSumViolation: return "RowSumViolation";
    case ErrorCode::MalformedScheme: return "MalformedScheme";
    case ErrorCode::ParseError: return "ParseError";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + what), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace exante
