#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace gradflow {

enum class ErrorCode {
  // markov_core
  InvalidShape,
  NegativeOffDiagonal,
  RowSumNonzero,
  InvalidDistribution,
  InvalidTangentVector,
  NotIrreducible,
  ZeroGenerator,
  DimensionMismatch,
  InvalidParameter,
  // spectral
  EigenFailure,
  // entropy
  BoundaryTooClose,
  DegenerateN,
  // structure
  SingularQbar,
  SingularMetric,
  NotRepresentable,
  NotReversible,
  // flowsim
  LeftSimplex,
  AtEquilibrium,
  DimensionTooSmall,
  PerturbationTooLarge,
  SupportTouchesEquilibrium,
  SupportLeavesSimplex,
  // zoo
  InvalidPi,
  InvalidV,
  MuTooLarge,
  ExhaustedTries,
  // io
  SchemaViolation,
};

std::string_view to_string(ErrorCode code);

/// Every failure raised by the library carries one of the codes above.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace gradflow
