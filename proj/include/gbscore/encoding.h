#ifndef GBSCORE_ENCODING_H_
#define GBSCORE_ENCODING_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "gbscore/dataset.h"

namespace gbscore {

struct WoeEntry {
  // nullopt is the pseudo-category collecting missing cells.
  std::optional<std::string> category;
  std::int64_t good_count = 0;
  std::int64_t bad_count = 0;
  double woe = 0.0;

  bool operator==(const WoeEntry&) const = default;
};

struct WoeOptions {
  double smoothing = 0.5;
  double unseen_woe = 0.0;
};

// Weight-of-evidence table for one categorical column, on the x100 scale:
//   woe_c = 100 * ln( ((G_c + s) / (G + 2s)) / ((B_c + s) / (B + 2s)) )
// Positive values are good-heavy, negative values bad-heavy.
class WoeMap {
 public:
  WoeMap() = default;
  WoeMap(std::string column, std::vector<WoeEntry> entries, double smoothing,
         double unseen_woe);

  const std::string& column() const { return column_; }
  const std::vector<WoeEntry>& entries() const { return entries_; }
  double smoothing() const { return smoothing_; }
  double unseen_woe() const { return unseen_woe_; }
  std::int64_t good_total() const;
  std::int64_t bad_total() const;

  // Unseen categories map to unseen_woe; a missing cell maps to the missing
  // pseudo-category when one was fitted, otherwise to unseen_woe.
  double lookup(const std::optional<std::string>& category) const;
  const WoeEntry* find(const std::optional<std::string>& category) const;

  bool operator==(const WoeMap& other) const {
    return column_ == other.column_ && entries_ == other.entries_ &&
           smoothing_ == other.smoothing_ && unseen_woe_ == other.unseen_woe_;
  }

 private:
  std::string column_;
  std::vector<WoeEntry> entries_;
  double smoothing_ = 0.5;
  double unseen_woe_ = 0.0;
  std::unordered_map<std::string, std::size_t> index_;
  std::optional<std::size_t> missing_index_;
};

double woe_value(std::int64_t goods_c, std::int64_t goods_total,
                 std::int64_t bads_c, std::int64_t bads_total, double smoothing);

// Errors: MissingColumn, NotCategorical, SingleClassDataset.
WoeMap fit_woe(const Dataset& d, const std::string& column,
               const WoeOptions& options = {});

// Total: never throws for a categorical column.
std::vector<double> apply_woe(const WoeMap& m, const Column& column);

// Entries sorted by woe descending (ties by category text, missing last).
std::vector<WoeEntry> export_mapping(const WoeMap& m);
WoeMap rebuild_mapping(const std::string& column,
                       const std::vector<WoeEntry>& rows, double smoothing,
                       double unseen_woe);
// CSV with header category,goods,bads,woe; missing is written as an empty
// category field.
std::string mapping_to_csv(const WoeMap& m);

// Fits one map per categorical feature column.
std::vector<WoeMap> fit_encoders(const Dataset& d, const WoeOptions& options = {});

// Replaces every categorical feature column by its numeric WOE column.
// Errors: NonNumericFeature when a categorical feature has no map.
Dataset encode_categoricals(const Dataset& d, const std::vector<WoeMap>& maps);

}  // namespace gbscore

#endif  // GBSCORE_ENCODING_H_
