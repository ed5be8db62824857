#include "gbscore/validation.h"

#include <cmath>
#include <limits>
#include <sstream>

#include "gbscore/csv.h"
#include "gbscore/error.h"
#include "gbscore/metrics.h"
#include "gbscore/random.h"

namespace gbscore {

std::string metric_name(MetricId id) {
  switch (id) {
    case MetricId::kLogLoss: return "log_loss";
    case MetricId::kRocAuc: return "roc_auc";
    case MetricId::kPrAuc: return "pr_auc";
    case MetricId::kKs: return "ks";
    case MetricId::kFbeta: return "fbeta";
  }
  return "unknown";
}

MetricId parse_metric(const std::string& name) {
  for (MetricId id : {MetricId::kLogLoss, MetricId::kRocAuc, MetricId::kPrAuc,
                      MetricId::kKs, MetricId::kFbeta}) {
    if (metric_name(id) == name) return id;
  }
  throw Error(ErrorCode::kInvalidArgument, "unknown metric '" + name + "'");
}

double compute_metric(const MetricSpec& metric, std::span<const std::uint8_t> labels,
                      std::span<const double> probs) {
  switch (metric.id) {
    case MetricId::kLogLoss: return log_loss(labels, probs);
    case MetricId::kRocAuc: return roc_curve(labels, probs).area;
    case MetricId::kPrAuc: return pr_curve(labels, probs).area;
    case MetricId::kKs: return ks_statistic(labels, probs).ks;
    case MetricId::kFbeta: {
      try {
        return fbeta(confusion(labels, probs, metric.threshold), metric.beta);
      } catch (const Error& e) {
        if (e.code() == ErrorCode::kUndefinedPrecision ||
            e.code() == ErrorCode::kUndefinedRecall) {
          return 0.0;
        }
        throw;
      }
    }
  }
  return 0.0;
}

std::vector<std::size_t> FoldAssignment::rows_in(int f) const {
  std::vector<std::size_t> out;
  for (std::size_t r = 0; r < fold.size(); ++r) {
    if (fold[r] == f) out.push_back(r);
  }
  return out;
}

std::vector<std::size_t> FoldAssignment::rows_not_in(int f) const {
  std::vector<std::size_t> out;
  for (std::size_t r = 0; r < fold.size(); ++r) {
    if (fold[r] != f) out.push_back(r);
  }
  return out;
}

FoldAssignment assign_folds(std::span<const std::uint8_t> labels, int k,
                            std::uint64_t seed) {
  if (k < 2) throw Error(ErrorCode::kInvalidArgument, "k must be >= 2");
  if (static_cast<std::size_t>(k) > labels.size()) {
    throw Error(ErrorCode::kFoldTooSmall,
                std::to_string(labels.size()) + " rows cannot fill " +
                    std::to_string(k) + " folds");
  }
  FoldAssignment out;
  out.k = k;
  out.seed = seed;
  out.fold.assign(labels.size(), -1);

  Rng rng(seed);
  std::size_t dealt = 0;
  for (std::uint8_t cls : {kGood, kBad}) {
    std::vector<std::size_t> rows;
    for (std::size_t r = 0; r < labels.size(); ++r) {
      if (labels[r] == cls) rows.push_back(r);
    }
    rng.shuffle(rows);
    for (std::size_t r : rows) {
      out.fold[r] = static_cast<int>(dealt++ % static_cast<std::size_t>(k));
    }
  }
  return out;
}

CvReport kfold_cv(const Dataset& d, const TrainConfig& cfg, int k,
                  const MetricSpec& metric, std::uint64_t seed) {
  return kfold_cv(d, cfg, assign_folds(d.labels(), k, seed), metric);
}

CvReport kfold_cv(const Dataset& d, const TrainConfig& cfg, const FoldAssignment& folds,
                  const MetricSpec& metric) {
  if (folds.fold.size() != d.row_count()) {
    throw Error(ErrorCode::kLengthMismatch, "fold assignment does not match data");
  }
  CvReport report;
  report.metric = metric;
  report.out_of_fold.assign(d.row_count(), 0.0);

  // Folds are independent; results are placed by fold id.
  for (int f = 0; f < folds.k; ++f) {
    const std::vector<std::size_t> train_rows = folds.rows_not_in(f);
    const std::vector<std::size_t> test_rows = folds.rows_in(f);
    const Dataset train_part = d.subset(train_rows);
    const Dataset test_part = d.subset(test_rows);
    const std::size_t bads = train_part.count_label(kBad);
    if (bads == 0 || bads == train_part.row_count()) {
      throw Error(ErrorCode::kFoldTooSmall,
                  "training part of fold " + std::to_string(f + 1) + " has one class");
    }

    TrainingHistory history;
    TrainOptions options;
    if (f == 0) {
      options.watch = &test_part;
      options.history = &history;
    }
    const BoostedModel model = train(train_part, cfg, options);
    const std::vector<double> probs = predict_probas(model, test_part);
    for (std::size_t i = 0; i < test_rows.size(); ++i) {
      report.out_of_fold[test_rows[i]] = probs[i];
    }

    double value = std::numeric_limits<double>::quiet_NaN();
    try {
      value = compute_metric(metric, test_part.labels(), probs);
    } catch (const Error& e) {
      // A single-class held-out fold (e.g. leave-one-out) has no ranking
      // metric of its own; it still counts in the pooled estimate.
      if (e.code() != ErrorCode::kSingleClassDataset) throw;
    }
    report.fold_values.push_back(value);
    if (f == 0) report.curve = learning_curve(history.train_loss, history.valid_loss);
  }

  double sum = 0.0;
  std::size_t defined = 0;
  for (double v : report.fold_values) {
    if (std::isnan(v)) continue;
    sum += v;
    ++defined;
  }
  report.mean = defined ? sum / static_cast<double>(defined)
                        : std::numeric_limits<double>::quiet_NaN();
  double sq = 0.0;
  for (double v : report.fold_values) {
    if (!std::isnan(v)) sq += (v - report.mean) * (v - report.mean);
  }
  report.stddev = defined > 1 ? std::sqrt(sq / static_cast<double>(defined - 1)) : 0.0;
  report.pooled = compute_metric(metric, d.labels(), report.out_of_fold);
  return report;
}

GridSearchResult grid_search(const Dataset& d, const std::vector<TrainConfig>& grid,
                             int k, const MetricSpec& metric, std::uint64_t seed) {
  if (grid.empty()) throw Error(ErrorCode::kInvalidArgument, "empty grid");
  const FoldAssignment folds = assign_folds(d.labels(), k, seed);
  GridSearchResult result;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    result.reports.push_back(kfold_cv(d, grid[i], folds, metric));
    const double value = result.reports.back().pooled;
    const double incumbent = result.reports[result.best_index].pooled;
    const bool better =
        metric.lower_is_better() ? value < incumbent : value > incumbent;
    if (i > 0 && better) result.best_index = i;
  }
  result.best = grid[result.best_index];
  return result;
}

std::vector<CurveRow> learning_curve(std::span<const double> train,
                                     std::span<const double> validation) {
  if (train.size() != validation.size()) {
    throw Error(ErrorCode::kLengthMismatch,
                std::to_string(train.size()) + " training vs " +
                    std::to_string(validation.size()) + " validation rounds");
  }
  std::vector<CurveRow> rows(train.size());
  for (std::size_t i = 0; i < train.size(); ++i) {
    rows[i] = {static_cast<int>(i + 1), train[i], validation[i]};
  }
  return rows;
}

double hoeffding_bound(std::int64_t n, std::int64_t hypotheses, double delta) {
  if (n < 1 || hypotheses < 1) {
    throw Error(ErrorCode::kInvalidArgument, "n and M must be >= 1");
  }
  const double two_m = 2.0 * static_cast<double>(hypotheses);
  if (!(delta > 0.0) || delta > two_m) {
    throw Error(ErrorCode::kInvalidDelta, "delta must lie in (0, 2M]");
  }
  return std::sqrt(2.0 / static_cast<double>(n) * std::log(two_m / delta));
}

std::string cv_report_to_csv(const CvReport& report) {
  std::ostringstream out;
  write_csv_row(out, {"fold", metric_name(report.metric.id)});
  for (std::size_t f = 0; f < report.fold_values.size(); ++f) {
    write_csv_row(out, {std::to_string(f + 1),
                        std::isnan(report.fold_values[f])
                            ? ""
                            : format_real(report.fold_values[f])});
  }
  write_csv_row(out, {"mean", format_real(report.mean)});
  write_csv_row(out, {"stddev", format_real(report.stddev)});
  write_csv_row(out, {"pooled", format_real(report.pooled)});
  return out.str();
}

std::string learning_curve_to_csv(const std::vector<CurveRow>& rows) {
  std::ostringstream out;
  write_csv_row(out, {"round", "train", "validation"});
  for (const CurveRow& r : rows) {
    write_csv_row(out, {std::to_string(r.round), format_real(r.train),
                        format_real(r.validation)});
  }
  return out.str();
}

}  // namespace gbscore
