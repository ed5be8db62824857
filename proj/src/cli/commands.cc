#include "gbscore/cli/commands.h"

#include <algorithm>
#include <cmath>
#include <optional>
#include <sstream>

#include "gbscore/booster.h"
#include "gbscore/csv.h"
#include "gbscore/encoding.h"
#include "gbscore/error.h"
#include "gbscore/explain.h"
#include "gbscore/metrics.h"
#include "gbscore/reports.h"
#include "gbscore/sampling.h"
#include "gbscore/synthetic.h"
#include "gbscore/validation.h"
#include "json.hpp"

namespace gbscore::cli {

namespace fs = std::filesystem;

namespace {

bool contains(const std::vector<std::string>& xs, const std::string& x) {
  return std::find(xs.begin(), xs.end(), x) != xs.end();
}

CsvOptions csv_options(const DataSettings& data, bool label_optional) {
  CsvOptions o;
  o.missing_markers = {data.missing.begin(), data.missing.end()};
  o.label_positive = data.label_positive;
  o.label_negative = data.label_negative;
  o.delimiter = data.delimiter;
  o.label_optional = label_optional;
  return o;
}

const fs::path& require_path(const fs::path& p, const char* key) {
  if (p.empty()) throw Error(ErrorCode::kConfigError, std::string(key) + " is not set");
  return p;
}

// File-name-safe version of a column name.
std::string file_token(const std::string& name) {
  std::string out;
  for (char c : name) {
    const bool ok = std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_' || c == '.';
    out.push_back(ok ? c : '_');
  }
  return out;
}

TrainConfig seeded(TrainConfig cfg, std::uint64_t seed) {
  cfg.seed = seed;
  return cfg;
}

Dataset apply_reweighting(const Dataset& d, const ReweightSpec& spec) {
  std::vector<double> w = reweight(d.labels(), spec);
  for (std::size_t r = 0; r < w.size(); ++r) w[r] *= d.weights()[r];
  return d.with_weights(std::move(w));
}

std::vector<double> read_score_column(const fs::path& path, const std::string& column,
                                      char delimiter) {
  const CsvTable table = read_csv(path, delimiter);
  const int idx = table.column_index(column);
  if (idx < 0) {
    throw Error(ErrorCode::kMissingColumn,
                path.string() + " lacks score column '" + column + "'");
  }
  std::vector<double> out;
  out.reserve(table.rows.size());
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const std::string& cell = table.rows[r][static_cast<std::size_t>(idx)];
    double v = 0.0;
    std::istringstream in(cell);
    in.imbue(std::locale::classic());
    if (!(in >> v) || !(in >> std::ws).eof() || std::isnan(v)) {
      throw Error(ErrorCode::kUnparseableNumeric,
                  path.string() + " row " + std::to_string(r + 1) + ": '" + cell + "'");
    }
    out.push_back(v);
  }
  return out;
}

std::string training_curve_csv(const TrainingHistory& h) {
  if (h.valid_loss.empty()) {
    std::ostringstream out;
    write_csv_row(out, {"round", "train"});
    for (std::size_t i = 0; i < h.train_loss.size(); ++i) {
      write_csv_row(out, {std::to_string(i + 1), format_real(h.train_loss[i])});
    }
    return out.str();
  }
  return learning_curve_to_csv(learning_curve(h.train_loss, h.valid_loss));
}

std::string importance_csv(const std::vector<FeatureImportance>& imp) {
  std::ostringstream out;
  write_csv_row(out, {"feature", "total_gain", "split_count"});
  for (const FeatureImportance& f : imp) {
    write_csv_row(out, {f.feature, format_real(f.total_gain), std::to_string(f.split_count)});
  }
  return out.str();
}

}  // namespace

std::vector<ColumnSchema> infer_schema(const std::vector<std::string>& header,
                                       const DataSettings& data, bool label_optional) {
  for (const auto* list : {&data.categorical, &data.exclude}) {
    for (const std::string& name : *list) {
      if (!contains(header, name)) {
        throw Error(ErrorCode::kMissingColumn, "header lacks configured column '" + name + "'");
      }
    }
  }
  std::vector<ColumnSchema> schema;
  bool has_label = false;
  for (const std::string& name : header) {
    ColumnSchema s;
    s.name = name;
    if (name == data.label) {
      s.role = ColumnRole::kLabel;
      has_label = true;
    } else if (contains(data.exclude, name)) {
      s.role = ColumnRole::kExclude;
      s.kind = ColumnKind::kCategorical;
    } else if (contains(data.categorical, name)) {
      s.kind = ColumnKind::kCategorical;
    }
    schema.push_back(std::move(s));
  }
  if (!has_label) {
    if (!label_optional) {
      throw Error(ErrorCode::kMissingColumn, "header lacks label column '" + data.label + "'");
    }
    schema.push_back({data.label, ColumnKind::kNumeric, ColumnRole::kLabel});
  }
  return schema;
}

Dataset load_run_data(const fs::path& path, const DataSettings& data, bool label_optional) {
  const CsvTable table = read_csv(path, data.delimiter);
  return load_csv(path, infer_schema(table.header, data, label_optional),
                  csv_options(data, label_optional));
}

void cmd_train(const RunConfig& rc) {
  Dataset d = load_run_data(require_path(rc.data.train, "data.train"), rc.data);
  std::optional<Dataset> oot;
  if (!rc.data.oot.empty()) oot = load_run_data(rc.data.oot, rc.data);

  const TrainConfig cfg = seeded(rc.train, rc.seed);
  TrainingHistory history;
  TrainOptions options;
  options.history = &history;
  if (oot) options.watch = &*oot;

  if (rc.sampling == SamplingMode::kReweight) {
    d = apply_reweighting(d, rc.reweight);
  } else if (rc.sampling == SamplingMode::kSmote) {
    // Interpolation needs numbers: encode first, keep the maps for scoring.
    std::vector<WoeMap> encoders = fit_encoders(d);
    SmoteConfig sc = rc.smote;
    sc.seed = rc.seed;
    d = smote(encode_categoricals(d, encoders), sc);
    options.encoders = std::move(encoders);
  }

  const BoostedModel model = train(d, cfg, options);
  const fs::path& out = rc.output_dir;
  save_model(model, out / kModelFile);
  write_text_file(out / kCurvesDir / "training_curve.csv", training_curve_csv(history));
  write_text_file(out / kReportsDir / "feature_importance.csv",
                  importance_csv(feature_importance(model)));
  for (const WoeMap& m : model.woe_maps) {
    write_text_file(out / kReportsDir / ("woe_" + file_token(m.column()) + ".csv"),
                    mapping_to_csv(m));
  }
}

void cmd_evaluate(const RunConfig& rc, const fs::path& model_path, const fs::path& data) {
  const BoostedModel model = load_model(model_path);
  const Dataset d = load_run_data(data, rc.data);
  const std::vector<double> probs = predict_probas(model, d);
  const EvalReport report = evaluate(d.labels(), probs, rc.report.threshold, rc.report.beta,
                                     rc.report.reliability_bins);

  const fs::path& out = rc.output_dir;
  write_text_file(out / kMetricsDir / "eval_report.json", eval_report_to_json(report));
  write_text_file(out / kCurvesDir / "roc.csv",
                  curve_to_csv(roc_curve(d.labels(), probs), "fpr", "tpr"));
  write_text_file(out / kCurvesDir / "pr.csv",
                  curve_to_csv(pr_curve(d.labels(), probs), "recall", "precision"));
  write_text_file(out / kCurvesDir / "ks.csv", ks_to_csv(ks_statistic(d.labels(), probs)));
  write_text_file(out / kCurvesDir / "reliability.csv", reliability_to_csv(report.reliability));
  // Probabilities of default: higher is riskier.
  const auto bins = score_distribution(probs, d.labels(), rc.report.bins, false);
  write_text_file(out / kReportsDir / "score_distribution.csv", distribution_to_csv(bins));
  write_text_file(out / kReportsDir / "score_distribution.txt", distribution_to_text(bins));
}

void cmd_predict(const RunConfig& rc, const fs::path& model_path, const fs::path& data) {
  const BoostedModel model = load_model(model_path);
  const Dataset d = load_run_data(data, rc.data, true);
  const std::vector<double> margins = predict_margins(model, d);
  std::ostringstream out;
  write_csv_row(out, {"row_id", "margin", "probability"});
  for (std::size_t r = 0; r < margins.size(); ++r) {
    write_csv_row(out, {std::to_string(r), format_real(margins[r]),
                        format_real(sigmoid(margins[r]))});
  }
  write_text_file(rc.output_dir / "predictions.csv", out.str());
}

void cmd_explain(const RunConfig& rc, const fs::path& model_path, const fs::path& data,
                 const std::string& rows) {
  const BoostedModel model = load_model(model_path);
  const std::size_t m = model.feature_names.size();
  if (m > rc.explain.max_features || m > kMaxExactFeatures) {
    throw Error(ErrorCode::kTooManyFeatures,
                std::to_string(m) + " features exceed the exact-enumeration limit of " +
                    std::to_string(std::min(rc.explain.max_features, kMaxExactFeatures)));
  }
  const Dataset d = load_run_data(data, rc.data, true);
  const FeatureMatrix x = model_features(model, d);
  const std::vector<std::size_t> selected = parse_row_selector(rows);
  if (selected.back() >= x.rows()) {
    throw Error(ErrorCode::kInvalidArgument,
                "row " + std::to_string(selected.back()) + " is out of range (" +
                    std::to_string(x.rows()) + " rows)");
  }

  // Background rows come from the training data when it is configured.
  const FeatureMatrix bg_source =
      rc.data.train.empty() ? x : model_features(model, load_run_data(rc.data.train, rc.data, true));
  const BackgroundSet bg = make_background(bg_source, rc.explain.background, rc.seed);
  const Scorer scorer = margin_scorer(model);

  std::vector<Attribution> attributions;
  for (std::size_t r : selected) {
    attributions.push_back(shapley_exact(scorer, x.row(r), bg, model.feature_names));
  }

  const fs::path dir = rc.output_dir / kExplainDir;
  write_text_file(dir / "attributions.csv", attributions_to_csv(attributions, selected));
  nlohmann::json header = nlohmann::json::array();
  for (std::size_t k = 0; k < selected.size(); ++k) {
    header.push_back({{"row_id", selected[k]},
                      {"base_value", attributions[k].phi0},
                      {"output_value", attributions[k].output}});
  }
  write_text_file(dir / "attributions.json",
                  nlohmann::json{{"scale", "margin"},
                                 {"features", model.feature_names},
                                 {"background_rows", bg.rows.size()},
                                 {"rows", header}}
                          .dump(2) +
                      "\n");
  const std::vector<FeatureSummary> summary = summary_data(attributions);
  write_text_file(dir / "summary.csv", summary_to_csv(summary));

  std::ostringstream points;
  write_csv_row(points, {"feature", "row_id", "value", "phi"});
  for (const FeatureSummary& s : summary) {
    for (std::size_t k = 0; k < s.points.size(); ++k) {
      write_csv_row(points, {s.name, std::to_string(selected[k]),
                             format_real(s.points[k].second), format_real(s.points[k].first)});
    }
  }
  write_text_file(dir / "summary_points.csv", points.str());

  // Each dependence plot is coloured by the most important other feature.
  for (const std::string& feature : model.feature_names) {
    std::string color = feature;
    for (const FeatureSummary& s : summary) {
      if (s.name != feature) {
        color = s.name;
        break;
      }
    }
    write_text_file(dir / ("dependence_" + file_token(feature) + ".csv"),
                    dependence_to_csv(dependence_data(attributions, feature, color), feature,
                                      color));
  }
  for (std::size_t k = 0; k < selected.size(); ++k) {
    write_text_file(dir / ("force_" + std::to_string(selected[k]) + ".csv"),
                    force_to_csv(force_data(attributions[k])));
  }
}

void cmd_cv(const RunConfig& rc) {
  Dataset d = load_run_data(require_path(rc.data.train, "data.train"), rc.data);
  if (rc.sampling == SamplingMode::kReweight) d = apply_reweighting(d, rc.reweight);

  const std::vector<TrainConfig> grid = expand_grid(seeded(rc.train, rc.seed), rc.cv);
  const GridSearchResult result = grid_search(d, grid, rc.cv.k, rc.cv.metric, rc.seed);
  const std::string metric = metric_name(rc.cv.metric.id);

  std::ostringstream folds;
  write_csv_row(folds, {"config", "fold", metric});
  std::ostringstream summary;
  std::vector<std::string> header = {"config"};
  for (const auto& [field, values] : rc.cv.grid) header.push_back(field);
  for (const char* col : {"mean", "stddev", "pooled", "best"}) header.push_back(col);
  write_csv_row(summary, header);

  for (std::size_t i = 0; i < result.reports.size(); ++i) {
    const CvReport& rep = result.reports[i];
    for (std::size_t f = 0; f < rep.fold_values.size(); ++f) {
      write_csv_row(folds, {std::to_string(i), std::to_string(f + 1),
                            std::isnan(rep.fold_values[f]) ? "" : format_real(rep.fold_values[f])});
    }
    std::vector<std::string> row = {std::to_string(i)};
    for (const auto& [field, values] : rc.cv.grid) {
      // expand_grid varies the last axis fastest.
      std::size_t stride = 1;
      for (auto it = rc.cv.grid.rbegin(); it != rc.cv.grid.rend() && it->first != field; ++it) {
        stride *= it->second.size();
      }
      row.push_back(format_real(values[(i / stride) % values.size()]));
    }
    row.push_back(format_real(rep.mean));
    row.push_back(format_real(rep.stddev));
    row.push_back(format_real(rep.pooled));
    row.push_back(i == result.best_index ? "1" : "0");
    write_csv_row(summary, row);
  }

  const fs::path& out = rc.output_dir;
  write_text_file(out / kMetricsDir / "cv_folds.csv", folds.str());
  write_text_file(out / kMetricsDir / "cv_summary.csv", summary.str());
  write_text_file(out / kMetricsDir / "cv_report.csv",
                  cv_report_to_csv(result.reports[result.best_index]));
  write_text_file(out / kMetricsDir / "best_config.json", train_config_to_json(result.best) + "\n");
  write_text_file(out / kCurvesDir / "cv_curve.csv",
                  learning_curve_to_csv(result.reports[result.best_index].curve));
}

void cmd_swapset(const RunConfig& rc, const fs::path& scores_a, const fs::path& scores_b,
                 const fs::path& labels) {
  const std::vector<double> a = read_score_column(scores_a, rc.report.score_column,
                                                  rc.data.delimiter);
  const std::vector<double> b = read_score_column(scores_b, rc.report.score_column,
                                                  rc.data.delimiter);
  const Dataset lab = load_run_data(labels, rc.data);
  if (rc.report.cutoffs.empty()) {
    throw Error(ErrorCode::kConfigError, "report.cutoffs is empty");
  }
  const std::string name_a = scores_a.stem().string();
  std::string name_b = scores_b.stem().string();
  if (name_b == name_a) name_b += "_b";
  for (double pct : rc.report.cutoffs) {
    const SwapSetTable t = swap_set(a, b, lab.labels(), pct, rc.report.lower_is_riskier);
    const std::string stem = "swap_set_" + format_real(pct);
    write_text_file(rc.output_dir / kReportsDir / (stem + ".csv"),
                    swap_set_to_csv(t, name_a, name_b));
    write_text_file(rc.output_dir / kReportsDir / (stem + ".txt"),
                    swap_set_to_text(t, name_a, name_b));
  }
}

void cmd_synth(const fs::path& path, std::size_t rows, double bad_rate, std::uint64_t seed) {
  SyntheticSpec spec;
  spec.rows = rows;
  spec.bad_rate = bad_rate;
  spec.seed = seed;
  write_text_file(path, dataset_to_csv(generate_credit_data(spec), "bad"));
}

}  // namespace gbscore::cli
