#include "gbscore/encoding.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "gbscore/csv.h"
#include "gbscore/error.h"

namespace gbscore {

WoeMap::WoeMap(std::string column, std::vector<WoeEntry> entries,
               double smoothing, double unseen_woe)
    : column_(std::move(column)),
      entries_(std::move(entries)),
      smoothing_(smoothing),
      unseen_woe_(unseen_woe) {
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    const WoeEntry& e = entries_[i];
    if (e.good_count < 0 || e.bad_count < 0) {
      throw Error(ErrorCode::kInvalidArgument, "negative WOE count");
    }
    if (!e.category) {
      if (missing_index_) {
        throw Error(ErrorCode::kInvalidArgument, "two missing pseudo-categories");
      }
      missing_index_ = i;
    } else if (!index_.emplace(*e.category, i).second) {
      throw Error(ErrorCode::kInvalidArgument,
                  "duplicate category '" + *e.category + "'");
    }
  }
}

std::int64_t WoeMap::good_total() const {
  std::int64_t total = 0;
  for (const WoeEntry& e : entries_) total += e.good_count;
  return total;
}

std::int64_t WoeMap::bad_total() const {
  std::int64_t total = 0;
  for (const WoeEntry& e : entries_) total += e.bad_count;
  return total;
}

const WoeEntry* WoeMap::find(const std::optional<std::string>& category) const {
  if (!category) return missing_index_ ? &entries_[*missing_index_] : nullptr;
  auto it = index_.find(*category);
  return it == index_.end() ? nullptr : &entries_[it->second];
}

double WoeMap::lookup(const std::optional<std::string>& category) const {
  const WoeEntry* e = find(category);
  return e ? e->woe : unseen_woe_;
}

double woe_value(std::int64_t goods_c, std::int64_t goods_total,
                 std::int64_t bads_c, std::int64_t bads_total, double smoothing) {
  const double good_share = (static_cast<double>(goods_c) + smoothing) /
                            (static_cast<double>(goods_total) + 2.0 * smoothing);
  const double bad_share = (static_cast<double>(bads_c) + smoothing) /
                           (static_cast<double>(bads_total) + 2.0 * smoothing);
  return std::log(good_share / bad_share) * 100.0;
}

WoeMap fit_woe(const Dataset& d, const std::string& column,
               const WoeOptions& options) {
  const Column& col = d.column(column);
  if (col.kind != ColumnKind::kCategorical) {
    throw Error(ErrorCode::kNotCategorical, "column '" + column + "' is numeric");
  }
  if (!(options.smoothing >= 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "smoothing must be >= 0");
  }
  const auto bads_total = static_cast<std::int64_t>(d.count_label(kBad));
  const auto goods_total = static_cast<std::int64_t>(d.count_label(kGood));
  if (bads_total == 0 || goods_total == 0) {
    throw Error(ErrorCode::kSingleClassDataset,
                "WOE needs both classes in column '" + column + "'");
  }

  // Slot k < categories.size() is category k; the last slot is missing.
  const std::size_t n_cat = col.categories.size();
  std::vector<std::int64_t> goods(n_cat + 1, 0), bads(n_cat + 1, 0);
  for (std::size_t r = 0; r < d.row_count(); ++r) {
    const std::size_t slot = col.codes[r] == kMissingCode
                                 ? n_cat
                                 : static_cast<std::size_t>(col.codes[r]);
    (d.labels()[r] == kBad ? bads : goods)[slot] += 1;
  }

  std::vector<WoeEntry> entries;
  for (std::size_t k = 0; k <= n_cat; ++k) {
    if (goods[k] + bads[k] == 0) continue;
    WoeEntry e;
    if (k < n_cat) e.category = col.categories[k];
    e.good_count = goods[k];
    e.bad_count = bads[k];
    e.woe = woe_value(goods[k], goods_total, bads[k], bads_total, options.smoothing);
    entries.push_back(std::move(e));
  }
  return WoeMap(column, std::move(entries), options.smoothing, options.unseen_woe);
}

std::vector<double> apply_woe(const WoeMap& m, const Column& column) {
  std::vector<double> out(column.size());
  if (column.kind != ColumnKind::kCategorical) {
    throw Error(ErrorCode::kNotCategorical,
                "column '" + column.name + "' is not categorical");
  }
  // Resolve each dictionary entry once.
  std::vector<double> per_code(column.categories.size());
  for (std::size_t k = 0; k < column.categories.size(); ++k) {
    per_code[k] = m.lookup(column.categories[k]);
  }
  const double missing = m.lookup(std::nullopt);
  for (std::size_t r = 0; r < column.size(); ++r) {
    const std::int32_t code = column.codes[r];
    out[r] = code == kMissingCode ? missing : per_code[static_cast<std::size_t>(code)];
  }
  return out;
}

std::vector<WoeEntry> export_mapping(const WoeMap& m) {
  std::vector<WoeEntry> rows = m.entries();
  std::stable_sort(rows.begin(), rows.end(), [](const WoeEntry& a, const WoeEntry& b) {
    if (a.woe != b.woe) return a.woe > b.woe;
    if (a.category.has_value() != b.category.has_value()) return a.category.has_value();
    return a.category < b.category;
  });
  return rows;
}

WoeMap rebuild_mapping(const std::string& column,
                       const std::vector<WoeEntry>& rows, double smoothing,
                       double unseen_woe) {
  return WoeMap(column, rows, smoothing, unseen_woe);
}

std::string mapping_to_csv(const WoeMap& m) {
  std::ostringstream out;
  write_csv_row(out, {"category", "goods", "bads", "woe"});
  for (const WoeEntry& e : export_mapping(m)) {
    write_csv_row(out, {e.category.value_or(""), std::to_string(e.good_count),
                        std::to_string(e.bad_count), format_real(e.woe)});
  }
  return out.str();
}

std::vector<WoeMap> fit_encoders(const Dataset& d, const WoeOptions& options) {
  std::vector<WoeMap> maps;
  for (const Column* c : d.feature_columns()) {
    if (c->kind == ColumnKind::kCategorical) {
      maps.push_back(fit_woe(d, c->name, options));
    }
  }
  return maps;
}

Dataset encode_categoricals(const Dataset& d, const std::vector<WoeMap>& maps) {
  Dataset out = d;
  for (const Column* c : d.feature_columns()) {
    if (c->kind != ColumnKind::kCategorical) continue;
    auto it = std::find_if(maps.begin(), maps.end(),
                           [&](const WoeMap& m) { return m.column() == c->name; });
    if (it == maps.end()) {
      throw Error(ErrorCode::kNonNumericFeature,
                  "categorical feature '" + c->name + "' has no WOE encoder");
    }
    Column encoded;
    encoded.name = c->name;
    encoded.kind = ColumnKind::kNumeric;
    encoded.role = c->role;
    encoded.numeric = apply_woe(*it, *c);
    out = out.with_column(std::move(encoded));
  }
  return out;
}

}  // namespace gbscore
