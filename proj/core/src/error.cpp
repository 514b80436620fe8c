#include "ccdp/error.hpp"

namespace ccdp {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::kMalformedHeaders: return "MalformedHeaders";
    case ErrorCode::kUnparseableDate: return "UnparseableDate";
    case ErrorCode::kIoFailure: return "IoFailure";
    case ErrorCode::kSchemaViolation: return "SchemaViolation";
    case ErrorCode::kModelDimensionMismatch: return "ModelDimensionMismatch";
    case ErrorCode::kMalformedVectorFile: return "MalformedVectorFile";
    case ErrorCode::kInvalidConfig: return "InvalidConfig";
    case ErrorCode::kOutOfRangeScore: return "OutOfRangeScore";
    case ErrorCode::kEmptyInput: return "EmptyInput";
    case ErrorCode::kKeyMismatch: return "KeyMismatch";
    case ErrorCode::kUnknownMessage: return "UnknownMessage";
    case ErrorCode::kZeroGoldMean: return "ZeroGoldMean";
  }
  return "Unknown";
}

}  // namespace ccdp
