#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace bvlab {

enum class ErrorCode {
  InvalidArgument,
  InvalidDensity,
  DegenerateCurve,
  UndefinedAtVertex,
  ClippedBall,
  PreconditionViolated,
  SingularityError,
  DegenerateField,
  SeparationFailure,
  ConvergenceFailure,
  NotApplicable,
  IoError,
};

inline std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "invalid-argument";
    case ErrorCode::InvalidDensity: return "invalid-density";
    case ErrorCode::DegenerateCurve: return "degenerate-curve";
    case ErrorCode::UndefinedAtVertex: return "undefined-at-vertex";
    case ErrorCode::ClippedBall: return "clipped-ball";
    case ErrorCode::PreconditionViolated: return "precondition-violated";
    case ErrorCode::SingularityError: return "singularity-error";
    case ErrorCode::DegenerateField: return "degenerate-field";
    case ErrorCode::SeparationFailure: return "separation-failure";
    case ErrorCode::ConvergenceFailure: return "convergence-failure";
    case ErrorCode::NotApplicable: return "not-applicable";
    case ErrorCode::IoError: return "io-error";
  }
  return "unknown";
}

/// Exception carrying a contract-level error code.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

inline void require(bool cond, ErrorCode code, const std::string& what) {
  if (!cond) throw Error(code, what);
}

}  // namespace bvlab
