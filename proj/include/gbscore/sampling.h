#ifndef GBSCORE_SAMPLING_H_
#define GBSCORE_SAMPLING_H_

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "gbscore/dataset.h"

namespace gbscore {

// Per-class arrays are indexed by label: [0] = Good, [1] = Bad.
struct ReweightSpec {
  std::array<double, 2> target_prior = {0.5, 0.5};
  std::array<double, 2> target_cost = {1.0, 1.0};
};

// Class priors measured from labels. Errors: SingleClassDataset.
std::array<double, 2> class_priors(std::span<const std::uint8_t> labels);

// C_tr(k) = C_t(k) * pi_t(k) / pi_tr(k).
std::array<double, 2> training_costs(const ReweightSpec& spec,
                                     const std::array<double, 2>& train_prior);

// Row weight = C_tr(label). Errors: SingleClassDataset, InvalidArgument.
std::vector<double> reweight(std::span<const std::uint8_t> labels,
                             const ReweightSpec& spec);

struct SmoteConfig {
  int k_neighbors = 5;
  double target_ratio = 1.0;  // minority / majority after augmentation
  std::uint64_t seed = 0;
};

// Appends synthetic minority rows x + u * (x_nn - x), u ~ U[0,1], where x_nn
// is one of the k nearest minority neighbours of x (Euclidean, ties by row
// index). Original rows are kept unchanged and in order; synthetic rows get
// weight 1 and missing values in non-feature columns.
// Errors: NonNumericFeature, MissingInMinority, TooFewMinority,
// InvalidArgument.
Dataset smote(const Dataset& d, const SmoteConfig& cfg);

}  // namespace gbscore

#endif  // GBSCORE_SAMPLING_H_
