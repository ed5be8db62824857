#ifndef GBSCORE_ERROR_H_
#define GBSCORE_ERROR_H_

#include <stdexcept>
#include <string>
#include <string_view>

namespace gbscore {

enum class ErrorCode {
  kInvalidArgument,
  kIoError,
  kConfigError,
  // dataset
  kMissingColumn,
  kUnparseableNumeric,
  kUnknownLabelValue,
  kDegenerateClass,
  kMissingTimeValue,
  // encoding / sampling / booster
  kNotCategorical,
  kSingleClassDataset,
  kNonNumericFeature,
  kMissingInMinority,
  kTooFewMinority,
  kUnknownFeature,
  kCorruptModelFile,
  kVersionMismatch,
  // validation
  kFoldTooSmall,
  kLengthMismatch,
  kInvalidDelta,
  // metrics
  kUndefinedPrecision,
  kUndefinedRecall,
  kInvalidBinCount,
  // explain
  kEmptyBackground,
  kTooManyFeatures,
};

std::string_view error_code_name(ErrorCode code);

// Every module reports failures through this type; `code()` identifies the
// contract violation and `what()` carries the human-readable detail.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& detail)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + detail),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace gbscore

#endif  // GBSCORE_ERROR_H_
