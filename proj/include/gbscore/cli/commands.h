#ifndef GBSCORE_CLI_COMMANDS_H_
#define GBSCORE_CLI_COMMANDS_H_

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "gbscore/cli/run_config.h"
#include "gbscore/dataset.h"

namespace gbscore::cli {

// Output layout under RunConfig::output_dir.
inline constexpr const char* kModelFile = "model.json";
inline constexpr const char* kMetricsDir = "metrics";
inline constexpr const char* kCurvesDir = "curves";
inline constexpr const char* kExplainDir = "explain";
inline constexpr const char* kReportsDir = "reports";

// Schema for a CSV header: the configured label, categorical and excluded
// columns; every other column is a numeric feature. Excluded columns are read
// as text so identifiers never fail numeric parsing.
// Errors: MissingColumn when a configured column is absent.
std::vector<ColumnSchema> infer_schema(const std::vector<std::string>& header,
                                       const DataSettings& data, bool label_optional);

Dataset load_run_data(const std::filesystem::path& path, const DataSettings& data,
                      bool label_optional = false);

// Writes model.json, curves/training_curve.csv, reports/feature_importance.csv
// and reports/woe_<column>.csv.
void cmd_train(const RunConfig& rc);

// Writes metrics/eval_report.json, curves/{roc,pr,ks,reliability}.csv and
// reports/score_distribution.{csv,txt}.
void cmd_evaluate(const RunConfig& rc, const std::filesystem::path& model,
                  const std::filesystem::path& data);

// Writes predictions.csv (row_id, margin, probability).
void cmd_predict(const RunConfig& rc, const std::filesystem::path& model,
                 const std::filesystem::path& data);

// Writes explain/{attributions,summary}.csv, explain/dependence_<feature>.csv
// and explain/force_<row>.csv.
void cmd_explain(const RunConfig& rc, const std::filesystem::path& model,
                 const std::filesystem::path& data, const std::string& rows);

// Writes metrics/cv_folds.csv, metrics/cv_summary.csv, metrics/best_config.json
// and curves/cv_curve.csv.
void cmd_cv(const RunConfig& rc);

// Writes reports/swap_set_<pct>.{csv,txt} per configured cutoff.
void cmd_swapset(const RunConfig& rc, const std::filesystem::path& scores_a,
                 const std::filesystem::path& scores_b,
                 const std::filesystem::path& labels);

// Writes a synthetic loan table (see synthetic.h) as CSV.
void cmd_synth(const std::filesystem::path& path, std::size_t rows, double bad_rate,
               std::uint64_t seed);

}  // namespace gbscore::cli

#endif  // GBSCORE_CLI_COMMANDS_H_
