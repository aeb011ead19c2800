#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace xlp {

enum class ErrorCode {
  kDimensionMismatch,
  kInvalidStructure,
  kUnknownStructure,
  kParseError,
  kNotOptimal,
  kProbeInfeasible,
  kPathInfeasible,
  kMapMismatch,
  kBaselineInapplicable,
  kInvalidGraph,
  kUnreachable,
  kNonIntegralSolution,
  kCsvParse,
  kNegativeDemand,
  kCycleDetected,
  kSolveFailed,
  kProbeIneffective,
  kCertificationFailed,
  kInvalidArgument,
  kIo,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace xlp
