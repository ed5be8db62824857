#ifndef GBSCORE_VALIDATION_H_
#define GBSCORE_VALIDATION_H_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "gbscore/booster.h"
#include "gbscore/dataset.h"

namespace gbscore {

enum class MetricId { kLogLoss, kRocAuc, kPrAuc, kKs, kFbeta };

struct MetricSpec {
  MetricId id = MetricId::kLogLoss;
  double threshold = 0.5;  // fbeta only
  double beta = 1.0;       // fbeta only

  // Loss metrics are minimised, scores maximised.
  bool lower_is_better() const { return id == MetricId::kLogLoss; }
};

std::string metric_name(MetricId id);
// Accepts log_loss, roc_auc, pr_auc, ks, fbeta. Errors: InvalidArgument.
MetricId parse_metric(const std::string& name);

// Metric value on one set of predictions. F-beta with an undefined
// precision or recall scores 0 so tuning can rank such candidates last.
double compute_metric(const MetricSpec& metric, std::span<const std::uint8_t> labels,
                      std::span<const double> probs);

// fold[row] in [0, k). Stratified: each class is shuffled and dealt
// round-robin, continuing the deal across classes, so fold sizes differ by
// at most one overall.
struct FoldAssignment {
  int k = 0;
  std::uint64_t seed = 0;
  std::vector<int> fold;

  std::vector<std::size_t> rows_in(int f) const;
  std::vector<std::size_t> rows_not_in(int f) const;
};

// Errors: InvalidArgument (k < 2), FoldTooSmall (k > rows).
FoldAssignment assign_folds(std::span<const std::uint8_t> labels, int k,
                            std::uint64_t seed);

struct CurveRow {
  int round = 0;
  double train = 0.0;
  double validation = 0.0;
};

struct CvReport {
  MetricSpec metric;
  std::vector<double> fold_values;
  double mean = 0.0;    // arithmetic mean of fold_values
  double stddev = 0.0;  // sample standard deviation of fold_values
  // Metric over all N out-of-fold predictions pooled together.
  double pooled = 0.0;
  std::vector<double> out_of_fold;  // probability per row
  // Per-round weighted log-loss with fold 1 as the watch set.
  std::vector<CurveRow> curve;
};

// Errors: FoldTooSmall when a training part lacks a class.
CvReport kfold_cv(const Dataset& d, const TrainConfig& cfg, int k,
                  const MetricSpec& metric, std::uint64_t seed);
CvReport kfold_cv(const Dataset& d, const TrainConfig& cfg, const FoldAssignment& folds,
                  const MetricSpec& metric);

struct GridSearchResult {
  std::size_t best_index = 0;
  TrainConfig best;
  std::vector<CvReport> reports;
};

// Ranks candidates by the pooled CV estimate; ties keep the earliest entry.
// All candidates share one fold assignment.
GridSearchResult grid_search(const Dataset& d, const std::vector<TrainConfig>& grid,
                             int k, const MetricSpec& metric, std::uint64_t seed);

// Errors: LengthMismatch.
std::vector<CurveRow> learning_curve(std::span<const double> train,
                                     std::span<const double> validation);

// sqrt((2/n) ln(2M/delta)). Errors: InvalidDelta for delta <= 0 or
// delta > 2M (negative logarithm); InvalidArgument for n < 1 or M < 1.
double hoeffding_bound(std::int64_t n, std::int64_t hypotheses, double delta);

std::string cv_report_to_csv(const CvReport& report);
std::string learning_curve_to_csv(const std::vector<CurveRow>& rows);

}  // namespace gbscore

#endif  // GBSCORE_VALIDATION_H_
