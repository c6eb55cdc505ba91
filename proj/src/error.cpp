#include "gridtariff/error.hpp"

namespace gridtariff {

std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::MissingFile: return "MissingFile";
    case ErrorCode::SchemaViolation: return "SchemaViolation";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::NegativeValue: return "NegativeValue";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::InvalidDesign: return "InvalidDesign";
    case ErrorCode::DegenerateLoad: return "DegenerateLoad";
    case ErrorCode::MissingPeakHours: return "MissingPeakHours";
    case ErrorCode::MissingThreshold: return "MissingThreshold";
    case ErrorCode::ZeroConsumption: return "ZeroConsumption";
    case ErrorCode::InfeasiblePeakRecovery: return "InfeasiblePeakRecovery";
    case ErrorCode::IoFailure: return "IoFailure";
  }
  return "Unknown";
}

}  // namespace gridtariff
