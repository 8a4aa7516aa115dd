#pragma once

#include <stdexcept>
#include <string>

namespace coneflow {

// Typed failure reasons. Every throwing operation in the suite raises a
// SolverError carrying one of these codes; the CLI maps the code to its
// exit-code contract (2 assumption violation, 3 non-convergence, 4 input).
enum class ErrorCode {
  NotMetzler,
  NotHurwitz,
  NotSchurStable,
  NotObservable,
  NotControllable,
  NotPositiveDefinite,
  BoundaryPoint,
  DimensionMismatch,
  NonBracketable,
  MaxIterations,
  SingularE,
  SingularBlock,
  SingularSystem,
  ZeroTrace,
  AssumptionViolated,
  ParseError,
};

class SolverError : public std::runtime_error {
 public:
  SolverError(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
  throw SolverError(code, what);
}

inline const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::NotMetzler: return "NotMetzler";
    case ErrorCode::NotHurwitz: return "NotHurwitz";
    case ErrorCode::NotSchurStable: return "NotSchurStable";
    case ErrorCode::NotObservable: return "NotObservable";
    case ErrorCode::NotControllable: return "NotControllable";
    case ErrorCode::NotPositiveDefinite: return "NotPositiveDefinite";
    case ErrorCode::BoundaryPoint: return "BoundaryPoint";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::NonBracketable: return "NonBracketable";
    case ErrorCode::MaxIterations: return "MaxIterations";
    case ErrorCode::SingularE: return "SingularE";
    case ErrorCode::SingularBlock: return "SingularBlock";
    case ErrorCode::SingularSystem: return "SingularSystem";
    case ErrorCode::ZeroTrace: return "ZeroTrace";
    case ErrorCode::AssumptionViolated: return "AssumptionViolated";
    case ErrorCode::ParseError: return "ParseError";
  }
  return "Unknown";
}

// CLI exit-code category for a failure.
inline int error_exit_code(ErrorCode code) {
  switch (code) {
    case ErrorCode::NotMetzler:
    case ErrorCode::NotHurwitz:
    case ErrorCode::NotSchurStable:
    case ErrorCode::NotObservable:
    case ErrorCode::NotControllable:
    case ErrorCode::NotPositiveDefinite:
    case ErrorCode::SingularE:
    case ErrorCode::BoundaryPoint:
    case ErrorCode::AssumptionViolated:
      return 2;
    case ErrorCode::NonBracketable:
    case ErrorCode::MaxIterations:
    case ErrorCode::SingularBlock:
    case ErrorCode::SingularSystem:
    case ErrorCode::ZeroTrace:
      return 3;
    case ErrorCode::DimensionMismatch:
    case ErrorCode::ParseError:
      return 4;
  }
  return 1;
}

}  // namespace coneflow
