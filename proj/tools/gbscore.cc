// gbscore: batch command-line front end.
//
// Exit codes: 0 success, 1 pipeline error, 2 command-line or config error.
// Errors are reported on stderr as one JSON object.

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "gbscore/cli/commands.h"
#include "gbscore/cli/run_config.h"
#include "gbscore/error.h"
#include "json.hpp"

namespace {

namespace cli = gbscore::cli;
namespace fs = std::filesystem;

struct Flags {
  std::string config;
  std::string model;
  std::string data;
  std::string out;
  std::optional<std::uint64_t> seed;
  std::string rows;
  std::optional<double> threshold;
  std::string scores_a;
  std::string scores_b;
  std::string labels;
  std::size_t synth_rows = 50000;
  double synth_bad_rate = 0.05;
};

void report_error(const std::string& code, const std::string& message) {
  nlohmann::json j{{"error", code}, {"message", message}};
  std::cerr << j.dump() << "\n";
}

cli::RunConfig resolve(const Flags& f) {
  cli::RunConfig rc = f.config.empty() ? cli::RunConfig{} : cli::load_run_config(f.config);
  if (!f.out.empty()) rc.output_dir = f.out;
  if (f.seed) rc.seed = *f.seed;
  if (!f.rows.empty()) rc.explain.rows = f.rows;
  if (f.threshold) {
    rc.report.threshold = *f.threshold;
    rc.cv.metric.threshold = *f.threshold;
  }
  return rc;
}

fs::path model_path(const Flags& f, const cli::RunConfig& rc) {
  return f.model.empty() ? rc.output_dir / cli::kModelFile : fs::path(f.model);
}

// Scoring data: --data, else the OOT file, else the training file.
fs::path scoring_data(const Flags& f, const cli::RunConfig& rc) {
  if (!f.data.empty()) return f.data;
  if (!rc.data.oot.empty()) return rc.data.oot;
  if (!rc.data.train.empty()) return rc.data.train;
  throw gbscore::Error(gbscore::ErrorCode::kConfigError, "no data file: pass --data");
}

void add_common(CLI::App* cmd, Flags& f) {
  cmd->add_option("--config", f.config, "Run configuration file")->check(CLI::ExistingFile);
  cmd->add_option("--out", f.out, "Output directory (overrides output.dir)");
  cmd->add_option("--seed", f.seed, "Global seed (overrides seed)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Gradient-boosted credit scoring toolkit"};
  app.require_subcommand(1);
  Flags f;

  CLI::App* train = app.add_subcommand("train", "Fit a model on data.train");
  add_common(train, f);
  train->add_option("--data", f.data, "Training data (overrides data.train)");

  CLI::App* evaluate = app.add_subcommand("evaluate", "Metrics and curves on labelled data");
  add_common(evaluate, f);
  evaluate->add_option("--model", f.model, "Model file (default <out>/model.json)");
  evaluate->add_option("--data", f.data, "Labelled data (default data.oot, then data.train)");
  evaluate->add_option("--threshold", f.threshold, "Probability cutoff for confusion metrics");

  CLI::App* predict = app.add_subcommand("predict", "Margins and probabilities per row");
  add_common(predict, f);
  predict->add_option("--model", f.model, "Model file (default <out>/model.json)");
  predict->add_option("--data", f.data, "Data to score");

  CLI::App* explain = app.add_subcommand("explain", "Exact Shapley attributions");
  add_common(explain, f);
  explain->add_option("--model", f.model, "Model file (default <out>/model.json)");
  explain->add_option("--data", f.data, "Data holding the rows to explain");
  explain->add_option("--rows", f.rows, "Row selector, e.g. 0-9,42");

  CLI::App* cv = app.add_subcommand("cv", "k-fold cross-validation and grid search");
  add_common(cv, f);
  cv->add_option("--data", f.data, "Training data (overrides data.train)");
  cv->add_option("--threshold", f.threshold, "Probability cutoff for fbeta");

  CLI::App* swapset = app.add_subcommand("swapset", "Swap-set tables for two score files");
  add_common(swapset, f);
  swapset->add_option("--scores-a", f.scores_a, "Scores of model A")->required();
  swapset->add_option("--scores-b", f.scores_b, "Scores of model B")->required();
  swapset->add_option("--labels", f.labels, "Labelled data aligned with the score files")
      ->required();

  CLI::App* synth = app.add_subcommand("synth", "Write a synthetic loan table");
  synth->add_option("--out", f.out, "Output CSV path")->required();
  synth->add_option("--rows", f.synth_rows, "Row count");
  synth->add_option("--bad-rate", f.synth_bad_rate, "Expected bad rate");
  synth->add_option("--seed", f.seed, "Generator seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    report_error("UsageError", e.what());
    return 2;
  }

  try {
    if (synth->parsed()) {
      cli::cmd_synth(f.out, f.synth_rows, f.synth_bad_rate, f.seed.value_or(20240501));
      return 0;
    }
    cli::RunConfig rc = resolve(f);
    if ((train->parsed() || cv->parsed()) && !f.data.empty()) rc.data.train = f.data;

    if (train->parsed()) {
      cli::cmd_train(rc);
    } else if (evaluate->parsed()) {
      cli::cmd_evaluate(rc, model_path(f, rc), scoring_data(f, rc));
    } else if (predict->parsed()) {
      cli::cmd_predict(rc, model_path(f, rc), scoring_data(f, rc));
    } else if (explain->parsed()) {
      cli::cmd_explain(rc, model_path(f, rc), scoring_data(f, rc), rc.explain.rows);
    } else if (cv->parsed()) {
      cli::cmd_cv(rc);
    } else if (swapset->parsed()) {
      cli::cmd_swapset(rc, f.scores_a, f.scores_b, f.labels);
    }
  } catch (const gbscore::Error& e) {
    report_error(std::string(gbscore::error_code_name(e.code())), e.what());
    return e.code() == gbscore::ErrorCode::kConfigError ? 2 : 1;
  } catch (const std::exception& e) {
    report_error("InternalError", e.what());
    return 1;
  }
  return 0;
}
