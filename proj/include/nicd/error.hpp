#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace nicd {

enum class ErrorCode {
  MalformedInput,
  DomainError,
  NegativeEntryForLowNorm,
  DimensionMismatch,
  EmptyStartSet,
  ArityMismatch,
  MissingPlayerFunction,
  UnbalancedFunction,
  InvalidTree,
  TooLargeForBruteForce,
  FamilyTooLarge,
  NotReversible,
  NotErgodic,
  InapplicableHypotheses,
  RhoOutOfRange,
  DegenerateCorrelation,
};

std::string_view error_name(ErrorCode code);

/// Precondition violation raised by every module. The code names the
/// violated contract; the CLI maps it to exit status 3.
class NicdError : public std::runtime_error {
 public:
  NicdError(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(error_name(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

inline void require(bool cond, ErrorCode code, const std::string& what) {
  if (!cond) throw NicdError(code, what);
}

}  // namespace nicd
