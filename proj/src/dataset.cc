#include "gbscore/dataset.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "gbscore/csv.h"
#include "gbscore/error.h"
#include "gbscore/random.h"

namespace gbscore {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

std::optional<double> parse_double(std::string_view text) {
  text = trim(text);
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) {
    return std::nullopt;
  }
  return value;
}

}  // namespace

std::optional<std::string> Column::category(std::size_t row) const {
  if (codes[row] == kMissingCode) return std::nullopt;
  return categories[static_cast<std::size_t>(codes[row])];
}

std::size_t Column::missing_count() const {
  std::size_t n = 0;
  for (std::size_t r = 0; r < size(); ++r) n += is_missing(r) ? 1 : 0;
  return n;
}

Dataset::Dataset(std::vector<Column> columns, std::vector<std::uint8_t> labels,
                 std::vector<double> weights)
    : columns_(std::move(columns)),
      labels_(std::move(labels)),
      weights_(std::move(weights)) {
  if (weights_.empty()) weights_.assign(labels_.size(), 1.0);
  if (weights_.size() != labels_.size()) {
    throw Error(ErrorCode::kLengthMismatch, "weights and labels differ in length");
  }
  std::unordered_set<std::string> names;
  for (const Column& c : columns_) {
    if (c.size() != labels_.size()) {
      throw Error(ErrorCode::kLengthMismatch,
                  "column '" + c.name + "' has " + std::to_string(c.size()) +
                      " rows, expected " + std::to_string(labels_.size()));
    }
    if (!names.insert(c.name).second) {
      throw Error(ErrorCode::kInvalidArgument, "duplicate column '" + c.name + "'");
    }
  }
  for (std::uint8_t y : labels_) {
    if (y > 1) throw Error(ErrorCode::kInvalidArgument, "labels must be 0 or 1");
  }
  for (double w : weights_) {
    if (!(w >= 0.0)) {
      throw Error(ErrorCode::kInvalidArgument, "weights must be non-negative");
    }
  }
}

const Column* Dataset::find_column(std::string_view name) const {
  for (const Column& c : columns_) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

const Column& Dataset::column(std::string_view name) const {
  const Column* c = find_column(name);
  if (c == nullptr) {
    throw Error(ErrorCode::kMissingColumn, "no column '" + std::string(name) + "'");
  }
  return *c;
}

std::vector<const Column*> Dataset::feature_columns() const {
  std::vector<const Column*> out;
  for (const Column& c : columns_) {
    if (c.role == ColumnRole::kFeature) out.push_back(&c);
  }
  return out;
}

std::vector<std::string> Dataset::feature_names() const {
  std::vector<std::string> out;
  for (const Column* c : feature_columns()) out.push_back(c->name);
  return out;
}

std::size_t Dataset::count_label(std::uint8_t label) const {
  return static_cast<std::size_t>(std::count(labels_.begin(), labels_.end(), label));
}

Dataset Dataset::subset(std::span<const std::size_t> rows) const {
  std::vector<Column> cols;
  cols.reserve(columns_.size());
  for (const Column& c : columns_) {
    Column out;
    out.name = c.name;
    out.kind = c.kind;
    out.role = c.role;
    out.categories = c.categories;
    if (c.kind == ColumnKind::kNumeric) {
      out.numeric.reserve(rows.size());
      for (std::size_t r : rows) out.numeric.push_back(c.numeric.at(r));
    } else {
      out.codes.reserve(rows.size());
      for (std::size_t r : rows) out.codes.push_back(c.codes.at(r));
    }
    cols.push_back(std::move(out));
  }
  std::vector<std::uint8_t> labels;
  std::vector<double> weights;
  labels.reserve(rows.size());
  weights.reserve(rows.size());
  for (std::size_t r : rows) {
    labels.push_back(labels_.at(r));
    weights.push_back(weights_.at(r));
  }
  return Dataset(std::move(cols), std::move(labels), std::move(weights));
}

Dataset Dataset::with_weights(std::vector<double> weights) const {
  return Dataset(columns_, labels_, std::move(weights));
}

Dataset Dataset::with_column(Column column) const {
  std::vector<Column> cols = columns_;
  bool replaced = false;
  for (Column& c : cols) {
    if (c.name == column.name) {
      c = std::move(column);
      replaced = true;
      break;
    }
  }
  if (!replaced) {
    throw Error(ErrorCode::kMissingColumn, "no column '" + column.name + "'");
  }
  return Dataset(std::move(cols), labels_, weights_);
}

Dataset parse_dataset_csv(std::string_view text,
                          const std::vector<ColumnSchema>& schema,
                          const CsvOptions& options) {
  const CsvTable table = parse_csv(text, options.delimiter);

  std::size_t label_count = 0;
  std::unordered_set<std::string> names;
  for (const ColumnSchema& s : schema) {
    if (!names.insert(s.name).second) {
      throw Error(ErrorCode::kInvalidArgument, "duplicate schema column '" + s.name + "'");
    }
    if (s.role == ColumnRole::kLabel) ++label_count;
  }
  if (label_count != 1) {
    throw Error(ErrorCode::kInvalidArgument,
                "schema must declare exactly one label column");
  }

  std::vector<int> source(schema.size());
  for (std::size_t i = 0; i < schema.size(); ++i) {
    source[i] = table.column_index(schema[i].name);
    if (source[i] < 0 && schema[i].role == ColumnRole::kLabel && options.label_optional) {
      continue;
    }
    if (source[i] < 0) {
      throw Error(ErrorCode::kMissingColumn,
                  "header lacks column '" + schema[i].name + "'");
    }
  }

  const std::size_t n = table.rows.size();
  std::vector<Column> columns;
  std::vector<std::uint8_t> labels(n);
  std::string negative = options.label_negative;

  for (std::size_t i = 0; i < schema.size(); ++i) {
    const ColumnSchema& s = schema[i];
    if (source[i] < 0) continue;  // absent optional label: every row stays Good
    const auto src = static_cast<std::size_t>(source[i]);

    if (s.role == ColumnRole::kLabel) {
      for (std::size_t r = 0; r < n; ++r) {
        const std::string& cell = table.rows[r][src];
        const std::string_view value = trim(cell);
        if (value == options.label_positive) {
          labels[r] = kBad;
          continue;
        }
        if (negative.empty() && !options.missing_markers.count(cell)) {
          negative = std::string(value);
        }
        if (!negative.empty() && value == negative) {
          labels[r] = kGood;
        } else {
          throw Error(ErrorCode::kUnknownLabelValue,
                      "row " + std::to_string(r + 1) + ": label value '" + cell +
                          "' is neither '" + options.label_positive + "' nor '" +
                          negative + "'");
        }
      }
      continue;
    }

    Column col;
    col.name = s.name;
    col.kind = s.kind;
    col.role = s.role;
    if (s.kind == ColumnKind::kNumeric) {
      col.numeric.resize(n);
      for (std::size_t r = 0; r < n; ++r) {
        const std::string& cell = table.rows[r][src];
        if (options.missing_markers.count(cell) ||
            options.missing_markers.count(std::string(trim(cell)))) {
          col.numeric[r] = kNaN;
          continue;
        }
        std::optional<double> v = parse_double(cell);
        if (!v) {
          throw Error(ErrorCode::kUnparseableNumeric,
                      "row " + std::to_string(r + 1) + ", column '" + s.name +
                          "': '" + cell + "'");
        }
        col.numeric[r] = *v;
      }
    } else {
      col.codes.resize(n);
      std::unordered_map<std::string, std::int32_t> index;
      for (std::size_t r = 0; r < n; ++r) {
        const std::string& cell = table.rows[r][src];
        if (options.missing_markers.count(cell)) {
          col.codes[r] = kMissingCode;
          continue;
        }
        auto [it, inserted] =
            index.emplace(cell, static_cast<std::int32_t>(col.categories.size()));
        if (inserted) col.categories.push_back(cell);
        col.codes[r] = it->second;
      }
    }
    columns.push_back(std::move(col));
  }
  return Dataset(std::move(columns), std::move(labels));
}

Dataset load_csv(const std::filesystem::path& path,
                 const std::vector<ColumnSchema>& schema,
                 const CsvOptions& options) {
  std::ifstream probe(path);
  if (!probe) throw Error(ErrorCode::kIoError, "cannot open " + path.string());
  std::ostringstream buffer;
  buffer << probe.rdbuf();
  return parse_dataset_csv(buffer.str(), schema, options);
}

std::string dataset_to_csv(const Dataset& d, const std::string& label_name,
                           char delimiter) {
  std::ostringstream out;
  std::vector<std::string> fields;
  for (const Column& c : d.columns()) fields.push_back(c.name);
  fields.push_back(label_name);
  write_csv_row(out, fields, delimiter);
  for (std::size_t r = 0; r < d.row_count(); ++r) {
    fields.clear();
    for (const Column& c : d.columns()) {
      if (c.is_missing(r)) {
        fields.emplace_back();
      } else if (c.kind == ColumnKind::kNumeric) {
        fields.push_back(format_real(c.numeric[r]));
      } else {
        fields.push_back(*c.category(r));
      }
    }
    fields.push_back(d.labels()[r] == kBad ? "1" : "0");
    write_csv_row(out, fields, delimiter);
  }
  return out.str();
}

std::pair<Dataset, Dataset> stratified_split(const Dataset& d,
                                             double test_fraction,
                                             std::uint64_t seed) {
  if (!(test_fraction > 0.0 && test_fraction < 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "test_fraction must lie in (0,1)");
  }
  std::vector<std::size_t> by_class[2];
  for (std::size_t r = 0; r < d.row_count(); ++r) {
    by_class[d.labels()[r]].push_back(r);
  }
  for (int k = 0; k < 2; ++k) {
    if (by_class[k].size() < 2) {
      throw Error(ErrorCode::kDegenerateClass,
                  "class " + std::to_string(k) + " has " +
                      std::to_string(by_class[k].size()) + " rows");
    }
  }

  Rng rng(seed);
  std::vector<std::size_t> train_rows, test_rows;
  for (int k = 0; k < 2; ++k) {
    std::vector<std::size_t>& rows = by_class[k];
    rng.shuffle(rows);
    const auto n_test = static_cast<std::size_t>(
        std::llround(static_cast<double>(rows.size()) * test_fraction));
    test_rows.insert(test_rows.end(), rows.begin(), rows.begin() + n_test);
    train_rows.insert(train_rows.end(), rows.begin() + n_test, rows.end());
  }
  std::sort(train_rows.begin(), train_rows.end());
  std::sort(test_rows.begin(), test_rows.end());
  return {d.subset(train_rows), d.subset(test_rows)};
}

std::pair<Dataset, Dataset> temporal_split(const Dataset& d,
                                           std::string_view time_column,
                                           double cutoff) {
  const Column& time = d.column(time_column);
  if (time.kind != ColumnKind::kNumeric) {
    throw Error(ErrorCode::kInvalidArgument, "time column must be numeric");
  }
  std::vector<std::size_t> in_time, out_of_time;
  for (std::size_t r = 0; r < d.row_count(); ++r) {
    if (time.is_missing(r)) {
      throw Error(ErrorCode::kMissingTimeValue,
                  "row " + std::to_string(r) + " has no time value");
    }
    (time.numeric[r] <= cutoff ? in_time : out_of_time).push_back(r);
  }
  return {d.subset(in_time), d.subset(out_of_time)};
}

}  // namespace gbscore
