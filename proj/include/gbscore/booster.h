#ifndef GBSCORE_BOOSTER_H_
#define GBSCORE_BOOSTER_H_

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gbscore/dataset.h"
#include "gbscore/encoding.h"

namespace gbscore {

// Hyperparameters of the second-order logistic booster.
struct TrainConfig {
  int n_rounds = 100;
  double learning_rate = 0.3;
  int max_depth = 6;
  double lambda = 1.0;            // L2 on leaf weights
  double alpha = 0.0;             // L1 on leaf weights
  double gamma = 0.0;             // minimum split gain
  double min_child_weight = 1.0;  // minimum hessian sum per child
  double max_delta_step = 0.0;    // 0 disables the leaf cap
  double scale_pos_weight = 1.0;
  double subsample = 1.0;
  double colsample_bytree = 1.0;
  double colsample_bylevel = 1.0;
  double base_score = 0.5;
  std::uint64_t seed = 0;

  // Throws InvalidArgument naming the first offending field.
  void validate() const;
  bool operator==(const TrainConfig&) const = default;
};

struct GradientPair {
  double g = 0.0;
  double h = 0.0;
};

inline double sigmoid(double margin) { return 1.0 / (1.0 + std::exp(-margin)); }
inline double logit(double p) { return std::log(p / (1.0 - p)); }

// Derivatives of the weighted logistic loss with respect to the margin.
GradientPair logistic_grad(std::uint8_t label, double margin, double weight);

double soft_threshold(double x, double a);

// Raw (pre-shrinkage) leaf value -soft_threshold(G, alpha) / (H + lambda),
// clamped to +-max_delta_step when the cap is on.
double leaf_weight(double g_sum, double h_sum, const TrainConfig& cfg);

// 1/2 [GL^2/(HL+l) + GR^2/(HR+l) - (GL+GR)^2/(HL+HR+l)] - gamma.
double split_gain(double g_left, double h_left, double g_right, double h_right,
                  const TrainConfig& cfg);

// Dense column-major numeric matrix; NaN marks a missing cell.
class FeatureMatrix {
 public:
  FeatureMatrix() = default;
  FeatureMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  double value(std::size_t row, std::size_t col) const { return data_[col * rows_ + row]; }
  double& at(std::size_t row, std::size_t col) { return data_[col * rows_ + row]; }
  std::span<const double> column(std::size_t col) const {
    return {data_.data() + col * rows_, rows_};
  }
  std::vector<double> row(std::size_t r) const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

// Feature columns of an all-numeric dataset. Errors: NonNumericFeature.
FeatureMatrix to_feature_matrix(const Dataset& d);

struct SplitCandidate {
  std::size_t feature = 0;
  double threshold = 0.0;
  bool default_left = true;
  double gain = 0.0;
  double g_left = 0.0, h_left = 0.0;
  double g_right = 0.0, h_right = 0.0;
};

// Exact greedy search over midpoints of consecutive distinct present values,
// trying both default directions for missing values. Returns the best
// candidate with gain > 0 whose children both reach min_child_weight; ties go
// to the lower feature, then the smaller threshold, then default-left.
std::optional<SplitCandidate> find_best_split(const FeatureMatrix& x,
                                              std::span<const GradientPair> gpairs,
                                              std::span<const std::size_t> rows,
                                              std::span<const std::size_t> features,
                                              const TrainConfig& cfg);

struct TreeNode {
  // Internal nodes have both children set; leaves have left == right == -1.
  int left = -1;
  int right = -1;
  std::size_t feature = 0;
  double threshold = 0.0;
  bool default_left = true;
  double gain = 0.0;
  double leaf = 0.0;  // raw value, before learning_rate

  bool is_leaf() const { return left < 0; }
  bool operator==(const TreeNode&) const = default;
};

class RegressionTree {
 public:
  RegressionTree() : nodes_(1) {}
  explicit RegressionTree(std::vector<TreeNode> nodes);

  const std::vector<TreeNode>& nodes() const { return nodes_; }

  // Missing values follow default_left; otherwise value < threshold goes left.
  template <typename ValueAt>
  int leaf_index(ValueAt&& value_at) const {
    int id = 0;
    while (!nodes_[static_cast<std::size_t>(id)].is_leaf()) {
      const TreeNode& n = nodes_[static_cast<std::size_t>(id)];
      const double v = value_at(n.feature);
      const bool go_left = std::isnan(v) ? n.default_left : v < n.threshold;
      id = go_left ? n.left : n.right;
    }
    return id;
  }
  double predict(std::span<const double> row) const {
    return nodes_[static_cast<std::size_t>(
                      leaf_index([&](std::size_t f) { return row[f]; }))]
        .leaf;
  }
  bool operator==(const RegressionTree&) const = default;

 private:
  std::vector<TreeNode> nodes_;
};

inline constexpr int kModelFormatVersion = 1;

struct BoostedModel {
  TrainConfig config;
  double base_score = 0.5;
  std::vector<std::string> feature_names;
  std::vector<WoeMap> woe_maps;
  std::vector<RegressionTree> trees;

  double base_margin() const { return logit(base_score); }
};

struct TrainingHistory {
  std::vector<double> train_loss;
  std::vector<double> valid_loss;
};

struct TrainOptions {
  // Evaluated after every round into history->valid_loss.
  const Dataset* watch = nullptr;
  TrainingHistory* history = nullptr;
  // Pre-fitted encoders; when absent, categorical features are WOE-encoded
  // with maps fitted on the training data.
  std::optional<std::vector<WoeMap>> encoders;
  WoeOptions woe;
};

// Errors: SingleClassDataset, NonNumericFeature, InvalidArgument.
BoostedModel train(const Dataset& d, const TrainConfig& cfg,
                   const TrainOptions& options = {});

// Encoded row aligned with model.feature_names; NaN = missing.
double predict_margin(const BoostedModel& m, std::span<const double> row);
double predict_proba(const BoostedModel& m, std::span<const double> row);

// Model feature columns of `d`, WOE-encoded where the model holds a map.
// Errors: UnknownFeature, NonNumericFeature.
FeatureMatrix model_features(const BoostedModel& m, const Dataset& d);
std::vector<double> predict_margins(const BoostedModel& m, const FeatureMatrix& x);
std::vector<double> predict_margins(const BoostedModel& m, const Dataset& d);
std::vector<double> predict_probas(const BoostedModel& m, const Dataset& d);

struct FeatureImportance {
  std::string feature;
  double total_gain = 0.0;
  int split_count = 0;
};

// Features that never split are omitted. Sorted by total gain descending.
std::vector<FeatureImportance> feature_importance(const BoostedModel& m);

// JSON persistence. Errors: CorruptModelFile, VersionMismatch, IoError.
std::string model_to_json(const BoostedModel& m);
std::string train_config_to_json(const TrainConfig& c);
BoostedModel model_from_json(std::string_view text);
void save_model(const BoostedModel& m, const std::filesystem::path& path);
BoostedModel load_model(const std::filesystem::path& path);

}  // namespace gbscore

#endif  // GBSCORE_BOOSTER_H_
