#include "xlp/error.hpp"

namespace xlp {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kDimensionMismatch: return "DimensionMismatch";
    case ErrorCode::kInvalidStructure: return "InvalidStructure";
    case ErrorCode::kUnknownStructure: return "UnknownStructure";
    case ErrorCode::kParseError: return "ParseError";
    case ErrorCode::kNotOptimal: return "NotOptimal";
    case ErrorCode::kProbeInfeasible: return "ProbeInfeasible";
    case ErrorCode::kPathInfeasible: return "PathInfeasible";
    case ErrorCode::kMapMismatch: return "MapMismatch";
    case ErrorCode::kBaselineInapplicable: return "BaselineInapplicable";
    case ErrorCode::kInvalidGraph: return "InvalidGraph";
    case ErrorCode::kUnreachable: return "Unreachable";
    case ErrorCode::kNonIntegralSolution: return "NonIntegralSolution";
    case ErrorCode::kCsvParse: return "CsvParse";
    case ErrorCode::kNegativeDemand: return "NegativeDemand";
    case ErrorCode::kCycleDetected: return "CycleDetected";
    case ErrorCode::kSolveFailed: return "SolveFailed";
    case ErrorCode::kProbeIneffective: return "ProbeIneffective";
    case ErrorCode::kCertificationFailed: return "CertificationFailed";
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kIo: return "Io";
  }
  return "Unknown";
}

}  // namespace xlp
