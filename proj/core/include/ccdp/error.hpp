#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace ccdp {

enum class ErrorCode {
  kMalformedHeaders,
  kUnparseableDate,
  kIoFailure,
  kSchemaViolation,
  kModelDimensionMismatch,
  kMalformedVectorFile,
  kInvalidConfig,
  kOutOfRangeScore,
  kEmptyInput,
  kKeyMismatch,
  kUnknownMessage,
  kZeroGoldMean,
};

std::string_view to_string(ErrorCode code) noexcept;

// Every recoverable failure in the library is reported as an Error carrying
// one of the codes above. The CLI maps them to exit code 2.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

// Non-fatal diagnostics collected during ingestion and loading.
using Warnings = std::vector<std::string>;

}  // namespace ccdp
