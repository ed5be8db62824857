#include <fstream>
#include <sstream>

#include "gbscore/booster.h"
#include "gbscore/error.h"
#include "json.hpp"

namespace gbscore {

namespace {

using nlohmann::json;

// JSON has no non-finite numbers; they are written as strings.
json real_to_json(double v) {
  if (std::isfinite(v)) return v;
  if (std::isnan(v)) return "nan";
  return v > 0 ? "inf" : "-inf";
}

double real_from_json(const json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  }
  throw Error(ErrorCode::kCorruptModelFile, "expected a number, got " + j.dump());
}

json config_to_json(const TrainConfig& c) {
  return json{{"n_rounds", c.n_rounds},
              {"learning_rate", real_to_json(c.learning_rate)},
              {"max_depth", c.max_depth},
              {"lambda", real_to_json(c.lambda)},
              {"alpha", real_to_json(c.alpha)},
              {"gamma", real_to_json(c.gamma)},
              {"min_child_weight", real_to_json(c.min_child_weight)},
              {"max_delta_step", real_to_json(c.max_delta_step)},
              {"scale_pos_weight", real_to_json(c.scale_pos_weight)},
              {"subsample", real_to_json(c.subsample)},
              {"colsample_bytree", real_to_json(c.colsample_bytree)},
              {"colsample_bylevel", real_to_json(c.colsample_bylevel)},
              {"base_score", real_to_json(c.base_score)},
              {"seed", c.seed}};
}

TrainConfig config_from_json(const json& j) {
  TrainConfig c;
  c.n_rounds = j.at("n_rounds").get<int>();
  c.learning_rate = real_from_json(j.at("learning_rate"));
  c.max_depth = j.at("max_depth").get<int>();
  c.lambda = real_from_json(j.at("lambda"));
  c.alpha = real_from_json(j.at("alpha"));
  c.gamma = real_from_json(j.at("gamma"));
  c.min_child_weight = real_from_json(j.at("min_child_weight"));
  c.max_delta_step = real_from_json(j.at("max_delta_step"));
  c.scale_pos_weight = real_from_json(j.at("scale_pos_weight"));
  c.subsample = real_from_json(j.at("subsample"));
  c.colsample_bytree = real_from_json(j.at("colsample_bytree"));
  c.colsample_bylevel = real_from_json(j.at("colsample_bylevel"));
  c.base_score = real_from_json(j.at("base_score"));
  c.seed = j.at("seed").get<std::uint64_t>();
  return c;
}

json woe_to_json(const WoeMap& m) {
  json entries = json::array();
  for (const WoeEntry& e : m.entries()) {
    entries.push_back({{"category", e.category ? json(*e.category) : json(nullptr)},
                       {"good", e.good_count},
                       {"bad", e.bad_count},
                       {"woe", real_to_json(e.woe)}});
  }
  return json{{"column", m.column()},
              {"smoothing", real_to_json(m.smoothing())},
              {"unseen_woe", real_to_json(m.unseen_woe())},
              {"entries", std::move(entries)}};
}

WoeMap woe_from_json(const json& j) {
  std::vector<WoeEntry> entries;
  for (const json& e : j.at("entries")) {
    WoeEntry entry;
    if (!e.at("category").is_null()) entry.category = e.at("category").get<std::string>();
    entry.good_count = e.at("good").get<std::int64_t>();
    entry.bad_count = e.at("bad").get<std::int64_t>();
    entry.woe = real_from_json(e.at("woe"));
    entries.push_back(std::move(entry));
  }
  return WoeMap(j.at("column").get<std::string>(), std::move(entries),
                real_from_json(j.at("smoothing")), real_from_json(j.at("unseen_woe")));
}

json tree_to_json(const RegressionTree& t) {
  json nodes = json::array();
  for (std::size_t id = 0; id < t.nodes().size(); ++id) {
    const TreeNode& n = t.nodes()[id];
    if (n.is_leaf()) {
      nodes.push_back({{"id", id}, {"leaf", real_to_json(n.leaf)}});
    } else {
      nodes.push_back({{"id", id},
                       {"feature", n.feature},
                       {"threshold", real_to_json(n.threshold)},
                       {"default_left", n.default_left},
                       {"left", n.left},
                       {"right", n.right},
                       {"gain", real_to_json(n.gain)}});
    }
  }
  return json{{"nodes", std::move(nodes)}};
}

RegressionTree tree_from_json(const json& j, std::size_t feature_count) {
  const json& nodes = j.at("nodes");
  std::vector<TreeNode> out(nodes.size());
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const json& n = nodes[i];
    if (n.at("id").get<std::size_t>() != i) {
      throw Error(ErrorCode::kCorruptModelFile, "tree node ids must be 0..n-1 in order");
    }
    TreeNode node;
    if (n.contains("leaf")) {
      node.leaf = real_from_json(n.at("leaf"));
    } else {
      node.feature = n.at("feature").get<std::size_t>();
      node.threshold = real_from_json(n.at("threshold"));
      node.default_left = n.at("default_left").get<bool>();
      node.left = n.at("left").get<int>();
      node.right = n.at("right").get<int>();
      node.gain = real_from_json(n.at("gain"));
      if (node.feature >= feature_count) {
        throw Error(ErrorCode::kCorruptModelFile, "split on unknown feature index");
      }
    }
    out[i] = node;
  }
  try {
    return RegressionTree(std::move(out));
  } catch (const Error& e) {
    throw Error(ErrorCode::kCorruptModelFile, e.what());
  }
}

}  // namespace

std::string train_config_to_json(const TrainConfig& c) { return config_to_json(c).dump(2); }

std::string model_to_json(const BoostedModel& m) {
  json woe = json::array();
  for (const WoeMap& w : m.woe_maps) woe.push_back(woe_to_json(w));
  json trees = json::array();
  for (const RegressionTree& t : m.trees) trees.push_back(tree_to_json(t));
  const json doc{{"version", kModelFormatVersion},
                 {"config", config_to_json(m.config)},
                 {"base_score", real_to_json(m.base_score)},
                 {"feature_names", m.feature_names},
                 {"woe_maps", std::move(woe)},
                 {"trees", std::move(trees)}};
  return doc.dump(1) + "\n";
}

BoostedModel model_from_json(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kCorruptModelFile, e.what());
  }
  try {
    if (!doc.is_object() || !doc.contains("version")) {
      throw Error(ErrorCode::kCorruptModelFile, "missing version field");
    }
    const int version = doc.at("version").get<int>();
    if (version != kModelFormatVersion) {
      throw Error(ErrorCode::kVersionMismatch,
                  "model file version " + std::to_string(version) + ", expected " +
                      std::to_string(kModelFormatVersion));
    }
    BoostedModel m;
    m.config = config_from_json(doc.at("config"));
    m.base_score = real_from_json(doc.at("base_score"));
    m.feature_names = doc.at("feature_names").get<std::vector<std::string>>();
    for (const json& w : doc.at("woe_maps")) m.woe_maps.push_back(woe_from_json(w));
    for (const json& t : doc.at("trees")) {
      m.trees.push_back(tree_from_json(t, m.feature_names.size()));
    }
    if (!(m.base_score > 0.0 && m.base_score < 1.0)) {
      throw Error(ErrorCode::kCorruptModelFile, "base_score outside (0,1)");
    }
    return m;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kCorruptModelFile, e.what());
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kCorruptModelFile || e.code() == ErrorCode::kVersionMismatch) {
      throw;
    }
    throw Error(ErrorCode::kCorruptModelFile, e.what());
  }
}

void save_model(const BoostedModel& m, const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIoError, "cannot write " + path.string());
  out << model_to_json(m);
  if (!out) throw Error(ErrorCode::kIoError, "write failed for " + path.string());
}

BoostedModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return model_from_json(buffer.str());
}

}  // namespace gbscore
