#ifndef GBSCORE_CLI_RUN_CONFIG_H_
#define GBSCORE_CLI_RUN_CONFIG_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "gbscore/booster.h"
#include "gbscore/sampling.h"
#include "gbscore/validation.h"

namespace gbscore::cli {

// One value of a TOML-style config: a scalar kept as text, or an array.
struct ConfigValue {
  std::string text;
  bool quoted = false;
  bool is_array = false;
  std::vector<ConfigValue> items;
};

// Parsed `[section]` / `key = value` document. Keys are "section.key"
// (top-level keys have no prefix) in file order.
class ConfigDocument {
 public:
  static ConfigDocument parse(std::string_view text);
  static ConfigDocument load(const std::filesystem::path& path);

  const std::vector<std::pair<std::string, ConfigValue>>& entries() const {
    return entries_;
  }
  const ConfigValue* find(std::string_view key) const;

 private:
  std::vector<std::pair<std::string, ConfigValue>> entries_;
};

enum class SamplingMode { kNone, kReweight, kSmote };

struct DataSettings {
  std::filesystem::path train;
  std::filesystem::path oot;
  std::string label = "bad";
  std::string label_positive = "1";
  std::string label_negative;
  std::vector<std::string> categorical;
  std::vector<std::string> exclude;
  std::vector<std::string> missing = {"", "NA", "NaN", "null"};
  char delimiter = ',';
};

struct CvSettings {
  int k = 5;
  MetricSpec metric;
  // TrainConfig field name -> candidate values, in file order.
  std::vector<std::pair<std::string, std::vector<double>>> grid;
};

struct ExplainSettings {
  std::size_t background = 100;
  std::size_t max_features = kMaxExactFeaturesDefault;
  std::string rows = "0-9";

  static constexpr std::size_t kMaxExactFeaturesDefault = 16;
};

struct ReportSettings {
  std::vector<double> cutoffs = {10.0, 20.0};
  int bins = 10;
  int reliability_bins = 10;
  double threshold = 0.5;
  double beta = 1.0;
  bool lower_is_riskier = true;
  std::string score_column = "score";
};

struct RunConfig {
  DataSettings data;
  TrainConfig train;
  SamplingMode sampling = SamplingMode::kNone;
  ReweightSpec reweight;
  SmoteConfig smote;
  CvSettings cv;
  ExplainSettings explain;
  ReportSettings report;
  std::filesystem::path output_dir = "out";
  std::uint64_t seed = 0;
};

// Errors: ConfigError for unknown keys, bad values or syntax.
RunConfig run_config_from_document(const ConfigDocument& doc);
RunConfig load_run_config(const std::filesystem::path& path);

// Sets one TrainConfig field by name. Errors: ConfigError.
void set_train_field(TrainConfig& cfg, const std::string& field, double value);

// Cartesian product of the grid over `base`, first grid key varying slowest.
std::vector<TrainConfig> expand_grid(const TrainConfig& base, const CvSettings& cv);

// "0-9,15,20-22" -> sorted unique row indices. Errors: ConfigError.
std::vector<std::size_t> parse_row_selector(const std::string& selector);

}  // namespace gbscore::cli

#endif  // GBSCORE_CLI_RUN_CONFIG_H_
