#include "gbscore/sampling.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "gbscore/error.h"
#include "gbscore/random.h"

namespace gbscore {

std::array<double, 2> class_priors(std::span<const std::uint8_t> labels) {
  std::array<double, 2> counts = {0.0, 0.0};
  for (std::uint8_t y : labels) counts[y] += 1.0;
  if (counts[0] == 0.0 || counts[1] == 0.0) {
    throw Error(ErrorCode::kSingleClassDataset, "both classes are required");
  }
  const double n = counts[0] + counts[1];
  return {counts[0] / n, counts[1] / n};
}

std::array<double, 2> training_costs(const ReweightSpec& spec,
                                     const std::array<double, 2>& train_prior) {
  for (int k = 0; k < 2; ++k) {
    if (!(spec.target_prior[k] > 0.0 && spec.target_prior[k] < 1.0)) {
      throw Error(ErrorCode::kInvalidArgument, "target priors must lie in (0,1)");
    }
    if (!(spec.target_cost[k] > 0.0)) {
      throw Error(ErrorCode::kInvalidArgument, "target costs must be positive");
    }
  }
  if (std::abs(spec.target_prior[0] + spec.target_prior[1] - 1.0) > 1e-9) {
    throw Error(ErrorCode::kInvalidArgument, "target priors must sum to 1");
  }
  return {spec.target_cost[0] * spec.target_prior[0] / train_prior[0],
          spec.target_cost[1] * spec.target_prior[1] / train_prior[1]};
}

std::vector<double> reweight(std::span<const std::uint8_t> labels,
                             const ReweightSpec& spec) {
  const std::array<double, 2> costs = training_costs(spec, class_priors(labels));
  std::vector<double> weights(labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i) weights[i] = costs[labels[i]];
  return weights;
}

namespace {

// k nearest minority neighbours of every minority row, by squared Euclidean
// distance with ties broken by row index.
std::vector<std::vector<std::size_t>> nearest_neighbors(
    const std::vector<std::vector<double>>& points, std::size_t k) {
  const std::size_t m = points.size();
  std::vector<std::vector<std::size_t>> out(m);
  std::vector<std::pair<double, std::size_t>> dist;
  for (std::size_t i = 0; i < m; ++i) {
    dist.clear();
    for (std::size_t j = 0; j < m; ++j) {
      if (j == i) continue;
      double d2 = 0.0;
      for (std::size_t f = 0; f < points[i].size(); ++f) {
        const double diff = points[i][f] - points[j][f];
        d2 += diff * diff;
      }
      dist.emplace_back(d2, j);
    }
    std::partial_sort(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(k),
                      dist.end());
    for (std::size_t t = 0; t < k; ++t) out[i].push_back(dist[t].second);
  }
  return out;
}

}  // namespace

Dataset smote(const Dataset& d, const SmoteConfig& cfg) {
  if (cfg.k_neighbors < 1) {
    throw Error(ErrorCode::kInvalidArgument, "k_neighbors must be >= 1");
  }
  if (!(cfg.target_ratio > 0.0 && cfg.target_ratio <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "target_ratio must lie in (0,1]");
  }
  const std::vector<const Column*> features = d.feature_columns();
  for (const Column* c : features) {
    if (c->kind != ColumnKind::kNumeric) {
      throw Error(ErrorCode::kNonNumericFeature,
                  "SMOTE needs numeric features; encode '" + c->name + "' first");
    }
  }

  const std::size_t bads = d.count_label(kBad);
  const std::size_t goods = d.count_label(kGood);
  const std::uint8_t minority_label = bads <= goods ? kBad : kGood;
  const std::size_t majority_count = std::max(bads, goods);

  std::vector<std::size_t> minority_rows;
  for (std::size_t r = 0; r < d.row_count(); ++r) {
    if (d.labels()[r] == minority_label) minority_rows.push_back(r);
  }
  const auto k = static_cast<std::size_t>(cfg.k_neighbors);
  if (minority_rows.size() < k + 1) {
    throw Error(ErrorCode::kTooFewMinority,
                std::to_string(minority_rows.size()) + " minority rows for k=" +
                    std::to_string(k));
  }

  std::vector<std::vector<double>> points(minority_rows.size());
  for (std::size_t i = 0; i < minority_rows.size(); ++i) {
    for (const Column* c : features) {
      const double v = c->numeric[minority_rows[i]];
      if (std::isnan(v)) {
        throw Error(ErrorCode::kMissingInMinority,
                    "row " + std::to_string(minority_rows[i]) + ", column '" +
                        c->name + "'");
      }
      points[i].push_back(v);
    }
  }

  const auto target = static_cast<std::size_t>(
      std::llround(cfg.target_ratio * static_cast<double>(majority_count)));
  const std::size_t n_synthetic =
      target > minority_rows.size() ? target - minority_rows.size() : 0;
  if (n_synthetic == 0) return d;

  const auto neighbors = nearest_neighbors(points, k);

  // Draw order per synthetic row: base point, neighbour slot, then u.
  Rng rng(cfg.seed);
  std::vector<std::vector<double>> synthetic(n_synthetic);
  for (std::size_t s = 0; s < n_synthetic; ++s) {
    const std::size_t base = rng.uniform_index(points.size());
    const std::size_t nn = neighbors[base][rng.uniform_index(k)];
    const double u = rng.uniform01();
    synthetic[s].resize(features.size());
    for (std::size_t f = 0; f < features.size(); ++f) {
      synthetic[s][f] = points[base][f] + u * (points[nn][f] - points[base][f]);
    }
  }

  std::vector<Column> columns = d.columns();
  std::size_t feature_slot = 0;
  for (Column& c : columns) {
    if (c.role == ColumnRole::kFeature) {
      for (std::size_t s = 0; s < n_synthetic; ++s) {
        c.numeric.push_back(synthetic[s][feature_slot]);
      }
      ++feature_slot;
    } else if (c.kind == ColumnKind::kNumeric) {
      c.numeric.insert(c.numeric.end(), n_synthetic,
                       std::numeric_limits<double>::quiet_NaN());
    } else {
      c.codes.insert(c.codes.end(), n_synthetic, kMissingCode);
    }
  }
  std::vector<std::uint8_t> labels = d.labels();
  labels.insert(labels.end(), n_synthetic, minority_label);
  std::vector<double> weights = d.weights();
  weights.insert(weights.end(), n_synthetic, 1.0);
  return Dataset(std::move(columns), std::move(labels), std::move(weights));
}

}  // namespace gbscore
