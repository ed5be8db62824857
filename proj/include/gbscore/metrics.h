#ifndef GBSCORE_METRICS_H_
#define GBSCORE_METRICS_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace gbscore {

// Labels use 1 = Bad (positive), 0 = Good. Scores and probabilities are
// "higher = more likely Bad".

inline constexpr double kProbabilityClamp = 1e-15;

// Mean binary cross-entropy with p clamped to [1e-15, 1 - 1e-15].
// Errors: LengthMismatch.
double log_loss(std::span<const std::uint8_t> labels, std::span<const double> probs);
double weighted_log_loss(std::span<const std::uint8_t> labels,
                         std::span<const double> probs,
                         std::span<const double> weights);

struct ConfusionMatrix {
  std::int64_t tp = 0, fp = 0, tn = 0, fn = 0;

  std::int64_t total() const { return tp + fp + tn + fn; }
  bool operator==(const ConfusionMatrix&) const = default;
};

// Predicted Bad when prob >= threshold.
ConfusionMatrix confusion(std::span<const std::uint8_t> labels,
                          std::span<const double> probs, double threshold);

// Errors: UndefinedPrecision (tp+fp == 0), UndefinedRecall (tp+fn == 0).
double precision(const ConfusionMatrix& cm);
double recall(const ConfusionMatrix& cm);
std::pair<double, double> precision_recall(const ConfusionMatrix& cm);
// (1+b^2) P R / (b^2 P + R); 0 when P = R = 0.
double fbeta(const ConfusionMatrix& cm, double beta);

struct CurvePoint {
  double x = 0.0;
  double y = 0.0;
};

struct CurveData {
  std::vector<CurvePoint> points;
  double area = 0.0;
};

// (FPR, TPR) from (0,0) to (1,1), one point per distinct score; trapezoid
// area. Errors: SingleClassDataset, LengthMismatch.
CurveData roc_curve(std::span<const std::uint8_t> labels, std::span<const double> scores);

// (recall, precision), one point per distinct score, preceded by (0, 1);
// area = sum over points of (R_i - R_{i-1}) * P_i.
CurveData pr_curve(std::span<const std::uint8_t> labels, std::span<const double> scores);

struct KsPoint {
  double threshold = 0.0;
  double bad_cdf = 0.0;   // fraction of Bads with score <= threshold
  double good_cdf = 0.0;  // fraction of Goods with score <= threshold
};

struct KsResult {
  double ks = 0.0;  // 0..100
  double threshold = 0.0;
  std::vector<KsPoint> points;
};

KsResult ks_statistic(std::span<const std::uint8_t> labels, std::span<const double> scores);

struct ReliabilityBin {
  double center = 0.0;
  double mean_predicted = 0.0;  // NaN when count == 0
  double observed_rate = 0.0;   // NaN when count == 0
  std::int64_t count = 0;

  bool defined() const { return count > 0; }
};

// Equal-width bins on [0,1]. A probability on an interior bin edge goes to
// the lower bin; 0 goes to the first bin. Errors: InvalidBinCount.
std::vector<ReliabilityBin> reliability_curve(std::span<const std::uint8_t> labels,
                                              std::span<const double> probs, int n_bins);

struct EvalReport {
  double ks = 0.0;
  double roc_auc = 0.0;
  double pr_auc = 0.0;
  double log_loss = 0.0;
  double threshold = 0.5;
  double beta = 1.0;
  std::optional<double> fbeta;  // empty when precision or recall is undefined
  ConfusionMatrix confusion;
  std::vector<ReliabilityBin> reliability;
};

EvalReport evaluate(std::span<const std::uint8_t> labels, std::span<const double> probs,
                    double threshold = 0.5, double beta = 1.0, int n_bins = 10);

std::string eval_report_to_json(const EvalReport& report);
// Header "x,y" (or the given names) then one row per point.
std::string curve_to_csv(const CurveData& curve, const std::string& x_name = "x",
                         const std::string& y_name = "y");
std::string ks_to_csv(const KsResult& ks);
std::string reliability_to_csv(const std::vector<ReliabilityBin>& bins);

}  // namespace gbscore

#endif  // GBSCORE_METRICS_H_
