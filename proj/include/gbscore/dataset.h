#ifndef GBSCORE_DATASET_H_
#define GBSCORE_DATASET_H_

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace gbscore {

enum class ColumnKind { kNumeric, kCategorical };
enum class ColumnRole { kFeature, kLabel, kExclude };

struct ColumnSchema {
  std::string name;
  ColumnKind kind = ColumnKind::kNumeric;
  ColumnRole role = ColumnRole::kFeature;
};

// Label convention used everywhere downstream: 1 = Bad (default), 0 = Good.
inline constexpr std::uint8_t kBad = 1;
inline constexpr std::uint8_t kGood = 0;

inline constexpr std::int32_t kMissingCode = -1;

// One named column. Numeric cells hold NaN when missing; categorical cells
// hold an index into `categories`, or kMissingCode.
struct Column {
  std::string name;
  ColumnKind kind = ColumnKind::kNumeric;
  ColumnRole role = ColumnRole::kFeature;
  std::vector<double> numeric;
  std::vector<std::int32_t> codes;
  std::vector<std::string> categories;

  std::size_t size() const {
    return kind == ColumnKind::kNumeric ? numeric.size() : codes.size();
  }
  bool is_missing(std::size_t row) const {
    return kind == ColumnKind::kNumeric ? std::isnan(numeric[row])
                                        : codes[row] == kMissingCode;
  }
  // Category text of a categorical cell; nullopt when missing.
  std::optional<std::string> category(std::size_t row) const;
  std::size_t missing_count() const;
};

// Immutable columnar table: feature/exclude columns plus labels and
// per-row sample weights.
class Dataset {
 public:
  Dataset() = default;
  Dataset(std::vector<Column> columns, std::vector<std::uint8_t> labels,
          std::vector<double> weights = {});

  std::size_t row_count() const { return labels_.size(); }
  const std::vector<Column>& columns() const { return columns_; }
  const std::vector<std::uint8_t>& labels() const { return labels_; }
  const std::vector<double>& weights() const { return weights_; }

  // Throws MissingColumn.
  const Column& column(std::string_view name) const;
  const Column* find_column(std::string_view name) const;

  // Columns with role == feature, in table order.
  std::vector<const Column*> feature_columns() const;
  std::vector<std::string> feature_names() const;

  std::size_t count_label(std::uint8_t label) const;

  // Rows in the given order; categorical dictionaries are shared unchanged.
  Dataset subset(std::span<const std::size_t> rows) const;
  Dataset with_weights(std::vector<double> weights) const;
  // Returns a copy with `column` replacing the same-named column.
  Dataset with_column(Column column) const;

 private:
  std::vector<Column> columns_;
  std::vector<std::uint8_t> labels_;
  std::vector<double> weights_;
};

struct CsvOptions {
  std::set<std::string> missing_markers = {"", "NA", "NaN", "null"};
  std::string label_positive = "1";
  // When empty, the first non-positive label value seen is taken as Good
  // and any further distinct value is rejected.
  std::string label_negative;
  char delimiter = ',';
  // Accept files without the label column (scoring data); labels become 0.
  bool label_optional = false;
};

// Errors: MissingColumn, UnparseableNumeric, UnknownLabelValue, IoError.
Dataset load_csv(const std::filesystem::path& path,
                 const std::vector<ColumnSchema>& schema,
                 const CsvOptions& options = {});
Dataset parse_dataset_csv(std::string_view text,
                          const std::vector<ColumnSchema>& schema,
                          const CsvOptions& options = {});

// Writes every column plus the label (as `label_name`, values "1"/"0");
// missing cells are written as empty fields.
std::string dataset_to_csv(const Dataset& d, const std::string& label_name,
                           char delimiter = ',');

// Per-class random split; test gets round(class_count * test_fraction) rows
// of each class. Errors: DegenerateClass, InvalidArgument.
std::pair<Dataset, Dataset> stratified_split(const Dataset& d,
                                             double test_fraction,
                                             std::uint64_t seed);

// (time <= cutoff, time > cutoff). Errors: MissingColumn, MissingTimeValue,
// InvalidArgument for a categorical time column.
std::pair<Dataset, Dataset> temporal_split(const Dataset& d,
                                           std::string_view time_column,
                                           double cutoff);

}  // namespace gbscore

#endif  // GBSCORE_DATASET_H_
