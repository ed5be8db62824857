#include "gbscore/booster.h"

#include <algorithm>
#include <limits>
#include <numeric>

#include "gbscore/error.h"
#include "gbscore/metrics.h"
#include "gbscore/random.h"

namespace gbscore {

void TrainConfig::validate() const {
  auto fail = [](const std::string& what) {
    throw Error(ErrorCode::kInvalidArgument, "TrainConfig: " + what);
  };
  auto unit_interval = [](double v) { return v > 0.0 && v <= 1.0; };
  if (n_rounds < 0) fail("n_rounds must be >= 0");
  if (!unit_interval(learning_rate)) fail("learning_rate must lie in (0,1]");
  if (max_depth < 1) fail("max_depth must be >= 1");
  if (!(lambda >= 0.0)) fail("lambda must be >= 0");
  if (!(alpha >= 0.0)) fail("alpha must be >= 0");
  if (!(gamma >= 0.0)) fail("gamma must be >= 0");
  if (!(min_child_weight >= 0.0)) fail("min_child_weight must be >= 0");
  if (!(max_delta_step >= 0.0)) fail("max_delta_step must be >= 0");
  if (!(scale_pos_weight > 0.0)) fail("scale_pos_weight must be > 0");
  if (!unit_interval(subsample)) fail("subsample must lie in (0,1]");
  if (!unit_interval(colsample_bytree)) fail("colsample_bytree must lie in (0,1]");
  if (!unit_interval(colsample_bylevel)) fail("colsample_bylevel must lie in (0,1]");
  if (!(base_score > 0.0 && base_score < 1.0)) fail("base_score must lie in (0,1)");
}

GradientPair logistic_grad(std::uint8_t label, double margin, double weight) {
  const double p = sigmoid(margin);
  return {(p - static_cast<double>(label)) * weight, p * (1.0 - p) * weight};
}

double soft_threshold(double x, double a) {
  if (x > a) return x - a;
  if (x < -a) return x + a;
  return 0.0;
}

double leaf_weight(double g_sum, double h_sum, const TrainConfig& cfg) {
  const double numerator = soft_threshold(g_sum, cfg.alpha);
  const double denominator = h_sum + cfg.lambda;
  if (numerator == 0.0 || denominator <= 0.0) return 0.0;
  double w = -numerator / denominator;
  if (cfg.max_delta_step > 0.0) {
    w = std::clamp(w, -cfg.max_delta_step, cfg.max_delta_step);
  }
  return w;
}

namespace {

double score_term(double g, double h, double lambda) {
  const double denominator = h + lambda;
  return denominator > 0.0 ? g * g / denominator : 0.0;
}

double midpoint(double lo, double hi) {
  const double mid = lo + (hi - lo) / 2.0;
  return mid > lo ? mid : hi;
}

// Both default directions of one threshold; `best` is replaced only on a
// strictly larger gain, so callers visiting features and thresholds in
// ascending order get the documented tie-break.
void consider_threshold(std::size_t feature, double threshold, double g_present_left,
                        double h_present_left, double g_missing, double h_missing,
                        double g_total, double h_total, const TrainConfig& cfg,
                        std::optional<SplitCandidate>& best) {
  for (bool default_left : {true, false}) {
    const double gl = default_left ? g_present_left + g_missing : g_present_left;
    const double hl = default_left ? h_present_left + h_missing : h_present_left;
    const double gr = g_total - gl;
    const double hr = h_total - hl;
    if (hl < cfg.min_child_weight || hr < cfg.min_child_weight) continue;
    const double gain = split_gain(gl, hl, gr, hr, cfg);
    if (!(gain > 0.0)) continue;
    if (best && !(gain > best->gain)) continue;
    best = SplitCandidate{feature, threshold, default_left, gain, gl, hl, gr, hr};
  }
}

std::size_t fraction_count(std::size_t n, double ratio) {
  const auto k = static_cast<std::size_t>(std::llround(static_cast<double>(n) * ratio));
  return std::clamp<std::size_t>(k, 1, n);
}

std::vector<std::size_t> sample_subset(const std::vector<std::size_t>& pool,
                                       double ratio, Rng& rng) {
  const std::size_t k = fraction_count(pool.size(), ratio);
  if (k == pool.size()) return pool;
  std::vector<std::size_t> out;
  for (std::size_t i : rng.sample_without_replacement(pool.size(), k)) {
    out.push_back(pool[i]);
  }
  return out;
}

// Per-feature row orderings shared by every tree of a training run.
struct SortedColumns {
  std::vector<std::vector<std::uint32_t>> present;  // by (value, row)
  std::vector<std::vector<std::uint32_t>> missing;  // by row
};

SortedColumns presort(const FeatureMatrix& x) {
  SortedColumns out;
  out.present.resize(x.cols());
  out.missing.resize(x.cols());
  for (std::size_t f = 0; f < x.cols(); ++f) {
    const auto col = x.column(f);
    for (std::size_t r = 0; r < x.rows(); ++r) {
      (std::isnan(col[r]) ? out.missing[f] : out.present[f])
          .push_back(static_cast<std::uint32_t>(r));
    }
    std::stable_sort(out.present[f].begin(), out.present[f].end(),
                     [&](std::uint32_t a, std::uint32_t b) { return col[a] < col[b]; });
  }
  return out;
}

// Grows one tree level by level. Split decisions are local to each node, so
// the resulting tree is the same one depth-first growth would produce; the
// level order only fixes when colsample_bylevel draws happen.
RegressionTree grow_tree(const FeatureMatrix& x, const SortedColumns& sorted,
                         std::span<const GradientPair> gpairs,
                         const std::vector<std::size_t>& sampled_rows,
                         const std::vector<std::size_t>& tree_features,
                         const TrainConfig& cfg, Rng& rng) {
  const std::size_t n = x.rows();
  std::vector<TreeNode> nodes(1);
  std::vector<double> node_g(1, 0.0), node_h(1, 0.0);
  std::vector<int> position(n, -1);
  for (std::size_t r : sampled_rows) position[r] = 0;
  for (std::size_t r = 0; r < n; ++r) {
    if (position[r] == 0) {
      node_g[0] += gpairs[r].g;
      node_h[0] += gpairs[r].h;
    }
  }

  std::vector<int> level = {0};
  for (int depth = 0; depth < cfg.max_depth && !level.empty(); ++depth) {
    const std::vector<std::size_t> level_features =
        sample_subset(tree_features, cfg.colsample_bylevel, rng);

    // slot_of[node] = index into `level`, or -1 when the node is not active.
    std::vector<int> slot_of(nodes.size(), -1);
    for (std::size_t s = 0; s < level.size(); ++s) {
      slot_of[static_cast<std::size_t>(level[s])] = static_cast<int>(s);
    }
    auto slot_for_row = [&](std::size_t r) -> int {
      return position[r] < 0 ? -1 : slot_of[static_cast<std::size_t>(position[r])];
    };

    const std::size_t m = level.size();
    std::vector<std::optional<SplitCandidate>> best(m);
    std::vector<double> gm(m), hm(m), gl(m), hl(m), prev(m);
    std::vector<char> has_prev(m);

    for (std::size_t f : level_features) {
      std::fill(gm.begin(), gm.end(), 0.0);
      std::fill(hm.begin(), hm.end(), 0.0);
      std::fill(gl.begin(), gl.end(), 0.0);
      std::fill(hl.begin(), hl.end(), 0.0);
      std::fill(has_prev.begin(), has_prev.end(), 0);
      for (std::uint32_t r : sorted.missing[f]) {
        const int s = slot_for_row(r);
        if (s < 0) continue;
        gm[static_cast<std::size_t>(s)] += gpairs[r].g;
        hm[static_cast<std::size_t>(s)] += gpairs[r].h;
      }
      const auto col = x.column(f);
      for (std::uint32_t r : sorted.present[f]) {
        const int si = slot_for_row(r);
        if (si < 0) continue;
        const auto s = static_cast<std::size_t>(si);
        const double v = col[r];
        if (has_prev[s] && v != prev[s]) {
          const auto node = static_cast<std::size_t>(level[s]);
          consider_threshold(f, midpoint(prev[s], v), gl[s], hl[s], gm[s], hm[s],
                             node_g[node], node_h[node], cfg, best[s]);
        }
        gl[s] += gpairs[r].g;
        hl[s] += gpairs[r].h;
        prev[s] = v;
        has_prev[s] = 1;
      }
    }

    std::vector<int> next_level;
    for (std::size_t s = 0; s < m; ++s) {
      if (!best[s]) continue;
      const auto id = static_cast<std::size_t>(level[s]);
      const int left = static_cast<int>(nodes.size());
      nodes.emplace_back();
      nodes.emplace_back();
      TreeNode& parent = nodes[id];
      parent.left = left;
      parent.right = left + 1;
      parent.feature = best[s]->feature;
      parent.threshold = best[s]->threshold;
      parent.default_left = best[s]->default_left;
      parent.gain = best[s]->gain;
      next_level.push_back(left);
      next_level.push_back(left + 1);
    }
    if (next_level.empty()) break;

    node_g.resize(nodes.size(), 0.0);
    node_h.resize(nodes.size(), 0.0);
    for (std::size_t r = 0; r < n; ++r) {
      if (position[r] < 0) continue;
      const TreeNode& node = nodes[static_cast<std::size_t>(position[r])];
      if (node.is_leaf()) continue;
      const double v = x.value(r, node.feature);
      const bool go_left = std::isnan(v) ? node.default_left : v < node.threshold;
      position[r] = go_left ? node.left : node.right;
      node_g[static_cast<std::size_t>(position[r])] += gpairs[r].g;
      node_h[static_cast<std::size_t>(position[r])] += gpairs[r].h;
    }
    level = std::move(next_level);
  }

  for (std::size_t id = 0; id < nodes.size(); ++id) {
    if (nodes[id].is_leaf()) nodes[id].leaf = leaf_weight(node_g[id], node_h[id], cfg);
  }
  return RegressionTree(std::move(nodes));
}

}  // namespace

double split_gain(double g_left, double h_left, double g_right, double h_right,
                  const TrainConfig& cfg) {
  return 0.5 * (score_term(g_left, h_left, cfg.lambda) +
                score_term(g_right, h_right, cfg.lambda) -
                score_term(g_left + g_right, h_left + h_right, cfg.lambda)) -
         cfg.gamma;
}

std::vector<double> FeatureMatrix::row(std::size_t r) const {
  std::vector<double> out(cols_);
  for (std::size_t c = 0; c < cols_; ++c) out[c] = value(r, c);
  return out;
}

FeatureMatrix to_feature_matrix(const Dataset& d) {
  const auto features = d.feature_columns();
  FeatureMatrix x(d.row_count(), features.size());
  for (std::size_t f = 0; f < features.size(); ++f) {
    if (features[f]->kind != ColumnKind::kNumeric) {
      throw Error(ErrorCode::kNonNumericFeature,
                  "feature '" + features[f]->name + "' is not numeric");
    }
    for (std::size_t r = 0; r < d.row_count(); ++r) x.at(r, f) = features[f]->numeric[r];
  }
  return x;
}

std::optional<SplitCandidate> find_best_split(const FeatureMatrix& x,
                                              std::span<const GradientPair> gpairs,
                                              std::span<const std::size_t> rows,
                                              std::span<const std::size_t> features,
                                              const TrainConfig& cfg) {
  std::vector<std::size_t> ordered(rows.begin(), rows.end());
  std::sort(ordered.begin(), ordered.end());
  double g_total = 0.0, h_total = 0.0;
  for (std::size_t r : ordered) {
    g_total += gpairs[r].g;
    h_total += gpairs[r].h;
  }
  std::vector<std::size_t> pool(features.begin(), features.end());
  std::sort(pool.begin(), pool.end());

  std::optional<SplitCandidate> best;
  std::vector<std::size_t> present;
  for (std::size_t f : pool) {
    present.clear();
    double g_missing = 0.0, h_missing = 0.0;
    for (std::size_t r : ordered) {
      if (std::isnan(x.value(r, f))) {
        g_missing += gpairs[r].g;
        h_missing += gpairs[r].h;
      } else {
        present.push_back(r);
      }
    }
    std::stable_sort(present.begin(), present.end(), [&](std::size_t a, std::size_t b) {
      return x.value(a, f) < x.value(b, f);
    });
    double gl = 0.0, hl = 0.0;
    for (std::size_t i = 0; i < present.size(); ++i) {
      const double v = x.value(present[i], f);
      if (i > 0) {
        const double p = x.value(present[i - 1], f);
        if (v != p) {
          consider_threshold(f, midpoint(p, v), gl, hl, g_missing, h_missing, g_total,
                             h_total, cfg, best);
        }
      }
      gl += gpairs[present[i]].g;
      hl += gpairs[present[i]].h;
    }
  }
  return best;
}

RegressionTree::RegressionTree(std::vector<TreeNode> nodes) : nodes_(std::move(nodes)) {
  if (nodes_.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "a tree needs at least one node");
  }
  const int count = static_cast<int>(nodes_.size());
  for (const TreeNode& n : nodes_) {
    if (n.is_leaf()) {
      if (n.right >= 0 || !std::isfinite(n.leaf)) {
        throw Error(ErrorCode::kInvalidArgument, "malformed leaf node");
      }
    } else if (n.right < 0 || n.left >= count || n.right >= count) {
      throw Error(ErrorCode::kInvalidArgument, "internal node with invalid child ids");
    }
  }
  // Children must point strictly forward so traversal always terminates.
  for (int id = 0; id < count; ++id) {
    const TreeNode& n = nodes_[static_cast<std::size_t>(id)];
    if (!n.is_leaf() && (n.left <= id || n.right <= id)) {
      throw Error(ErrorCode::kInvalidArgument, "child ids must exceed parent id");
    }
  }
}

BoostedModel train(const Dataset& d, const TrainConfig& cfg,
                   const TrainOptions& options) {
  cfg.validate();
  const std::size_t bads = d.count_label(kBad);
  if (bads == 0 || bads == d.row_count()) {
    throw Error(ErrorCode::kSingleClassDataset, "training data has one class");
  }

  BoostedModel model;
  model.config = cfg;
  model.base_score = cfg.base_score;
  model.feature_names = d.feature_names();
  model.woe_maps = options.encoders ? *options.encoders : fit_encoders(d, options.woe);

  const FeatureMatrix x = model_features(model, d);
  const std::size_t n = x.rows();
  const SortedColumns sorted = presort(x);

  std::vector<double> row_weight(n);
  double weight_sum = 0.0;
  for (std::size_t r = 0; r < n; ++r) {
    row_weight[r] = d.weights()[r] * (d.labels()[r] == kBad ? cfg.scale_pos_weight : 1.0);
    weight_sum += row_weight[r];
  }
  if (!(weight_sum > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "all sample weights are zero");
  }

  std::vector<double> margins(n, model.base_margin());
  FeatureMatrix watch_x;
  std::vector<double> watch_margins;
  std::vector<double> watch_weight;
  if (options.watch != nullptr) {
    watch_x = model_features(model, *options.watch);
    watch_margins.assign(watch_x.rows(), model.base_margin());
    for (std::size_t r = 0; r < watch_x.rows(); ++r) {
      watch_weight.push_back(options.watch->weights()[r] *
                             (options.watch->labels()[r] == kBad ? cfg.scale_pos_weight
                                                                 : 1.0));
    }
  }

  std::vector<std::size_t> all_rows(n);
  std::iota(all_rows.begin(), all_rows.end(), 0);
  std::vector<std::size_t> all_features(x.cols());
  std::iota(all_features.begin(), all_features.end(), 0);

  auto record_loss = [](const std::vector<std::uint8_t>& labels,
                        const std::vector<double>& m, const std::vector<double>& w) {
    std::vector<double> probs(m.size());
    for (std::size_t i = 0; i < m.size(); ++i) probs[i] = sigmoid(m[i]);
    return weighted_log_loss(labels, probs, w);
  };

  Rng rng(cfg.seed);
  std::vector<GradientPair> gpairs(n);
  std::vector<double> row_buffer(x.cols());
  for (int round = 0; round < cfg.n_rounds; ++round) {
    for (std::size_t r = 0; r < n; ++r) {
      gpairs[r] = logistic_grad(d.labels()[r], margins[r], row_weight[r]);
    }
    // Draw order: rows, then tree columns, then per-level columns.
    const std::vector<std::size_t> rows = sample_subset(all_rows, cfg.subsample, rng);
    const std::vector<std::size_t> tree_features =
        sample_subset(all_features, cfg.colsample_bytree, rng);
    RegressionTree tree = grow_tree(x, sorted, gpairs, rows, tree_features, cfg, rng);

    for (std::size_t r = 0; r < n; ++r) {
      const int leaf = tree.leaf_index([&](std::size_t f) { return x.value(r, f); });
      margins[r] += cfg.learning_rate * tree.nodes()[static_cast<std::size_t>(leaf)].leaf;
    }
    for (std::size_t r = 0; r < watch_margins.size(); ++r) {
      const int leaf = tree.leaf_index([&](std::size_t f) { return watch_x.value(r, f); });
      watch_margins[r] +=
          cfg.learning_rate * tree.nodes()[static_cast<std::size_t>(leaf)].leaf;
    }
    model.trees.push_back(std::move(tree));

    if (options.history != nullptr) {
      options.history->train_loss.push_back(record_loss(d.labels(), margins, row_weight));
      if (options.watch != nullptr) {
        options.history->valid_loss.push_back(
            record_loss(options.watch->labels(), watch_margins, watch_weight));
      }
    }
  }
  return model;
}

double predict_margin(const BoostedModel& m, std::span<const double> row) {
  if (row.size() != m.feature_names.size()) {
    throw Error(ErrorCode::kUnknownFeature,
                "row has " + std::to_string(row.size()) + " values, model expects " +
                    std::to_string(m.feature_names.size()));
  }
  double margin = m.base_margin();
  for (const RegressionTree& t : m.trees) {
    margin += m.config.learning_rate * t.predict(row);
  }
  return margin;
}

double predict_proba(const BoostedModel& m, std::span<const double> row) {
  return sigmoid(predict_margin(m, row));
}

FeatureMatrix model_features(const BoostedModel& m, const Dataset& d) {
  FeatureMatrix x(d.row_count(), m.feature_names.size());
  for (std::size_t f = 0; f < m.feature_names.size(); ++f) {
    const std::string& name = m.feature_names[f];
    const Column* col = d.find_column(name);
    if (col == nullptr) {
      throw Error(ErrorCode::kUnknownFeature, "data lacks model feature '" + name + "'");
    }
    if (col->kind == ColumnKind::kNumeric) {
      for (std::size_t r = 0; r < d.row_count(); ++r) x.at(r, f) = col->numeric[r];
      continue;
    }
    auto it = std::find_if(m.woe_maps.begin(), m.woe_maps.end(),
                           [&](const WoeMap& w) { return w.column() == name; });
    if (it == m.woe_maps.end()) {
      throw Error(ErrorCode::kNonNumericFeature,
                  "categorical feature '" + name + "' has no WOE encoder");
    }
    const std::vector<double> encoded = apply_woe(*it, *col);
    for (std::size_t r = 0; r < d.row_count(); ++r) x.at(r, f) = encoded[r];
  }
  return x;
}

std::vector<double> predict_margins(const BoostedModel& m, const FeatureMatrix& x) {
  std::vector<double> out(x.rows(), m.base_margin());
  for (const RegressionTree& t : m.trees) {
    for (std::size_t r = 0; r < x.rows(); ++r) {
      const int leaf = t.leaf_index([&](std::size_t f) { return x.value(r, f); });
      out[r] += m.config.learning_rate * t.nodes()[static_cast<std::size_t>(leaf)].leaf;
    }
  }
  return out;
}

std::vector<double> predict_margins(const BoostedModel& m, const Dataset& d) {
  return predict_margins(m, model_features(m, d));
}

std::vector<double> predict_probas(const BoostedModel& m, const Dataset& d) {
  std::vector<double> out = predict_margins(m, d);
  for (double& v : out) v = sigmoid(v);
  return out;
}

std::vector<FeatureImportance> feature_importance(const BoostedModel& m) {
  std::vector<FeatureImportance> all(m.feature_names.size());
  for (std::size_t f = 0; f < all.size(); ++f) all[f].feature = m.feature_names[f];
  for (const RegressionTree& t : m.trees) {
    for (const TreeNode& n : t.nodes()) {
      if (n.is_leaf()) continue;
      all[n.feature].total_gain += n.gain;
      all[n.feature].split_count += 1;
    }
  }
  std::vector<FeatureImportance> out;
  for (FeatureImportance& fi : all) {
    if (fi.split_count > 0) out.push_back(std::move(fi));
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const FeatureImportance& a, const FeatureImportance& b) {
                     return a.total_gain > b.total_gain;
                   });
  return out;
}

}  // namespace gbscore
