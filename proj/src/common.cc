#include <algorithm>

#include "gbscore/error.h"
#include "gbscore/random.h"

namespace gbscore {

std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kIoError: return "IoError";
    case ErrorCode::kConfigError: return "ConfigError";
    case ErrorCode::kMissingColumn: return "MissingColumn";
    case ErrorCode::kUnparseableNumeric: return "UnparseableNumeric";
    case ErrorCode::kUnknownLabelValue: return "UnknownLabelValue";
    case ErrorCode::kDegenerateClass: return "DegenerateClass";
    case ErrorCode::kMissingTimeValue: return "MissingTimeValue";
    case ErrorCode::kNotCategorical: return "NotCategorical";
    case ErrorCode::kSingleClassDataset: return "SingleClassDataset";
    case ErrorCode::kNonNumericFeature: return "NonNumericFeature";
    case ErrorCode::kMissingInMinority: return "MissingInMinority";
    case ErrorCode::kTooFewMinority: return "TooFewMinority";
    case ErrorCode::kUnknownFeature: return "UnknownFeature";
    case ErrorCode::kCorruptModelFile: return "CorruptModelFile";
    case ErrorCode::kVersionMismatch: return "VersionMismatch";
    case ErrorCode::kFoldTooSmall: return "FoldTooSmall";
    case ErrorCode::kLengthMismatch: return "LengthMismatch";
    case ErrorCode::kInvalidDelta: return "InvalidDelta";
    case ErrorCode::kUndefinedPrecision: return "UndefinedPrecision";
    case ErrorCode::kUndefinedRecall: return "UndefinedRecall";
    case ErrorCode::kInvalidBinCount: return "InvalidBinCount";
    case ErrorCode::kEmptyBackground: return "EmptyBackground";
    case ErrorCode::kTooManyFeatures: return "TooManyFeatures";
  }
  return "Unknown";
}

std::vector<std::size_t> Rng::sample_without_replacement(std::size_t n,
                                                         std::size_t count) {
  count = std::min(count, n);
  std::vector<std::size_t> pool(n);
  for (std::size_t i = 0; i < n; ++i) pool[i] = i;
  // Partial Fisher-Yates: the first `count` slots become the sample.
  for (std::size_t i = 0; i < count; ++i) {
    std::size_t j = i + uniform_index(n - i);
    std::swap(pool[i], pool[j]);
  }
  pool.resize(count);
  std::sort(pool.begin(), pool.end());
  return pool;
}

}  // namespace gbscore
