#include "gbscore/metrics.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "gbscore/csv.h"
#include "gbscore/error.h"
#include "json.hpp"

namespace gbscore {

namespace {

void check_lengths(std::size_t a, std::size_t b) {
  if (a != b) {
    throw Error(ErrorCode::kLengthMismatch,
                std::to_string(a) + " labels vs " + std::to_string(b) + " values");
  }
}

std::pair<std::int64_t, std::int64_t> class_counts(std::span<const std::uint8_t> labels) {
  std::int64_t pos = 0;
  for (std::uint8_t y : labels) pos += y;
  const auto neg = static_cast<std::int64_t>(labels.size()) - pos;
  if (pos == 0 || neg == 0) {
    throw Error(ErrorCode::kSingleClassDataset, "curve needs both classes");
  }
  return {pos, neg};
}

// Row indices ordered by score; equal scores stay adjacent.
std::vector<std::size_t> order_by_score(std::span<const double> scores, bool descending) {
  std::vector<std::size_t> idx(scores.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    return descending ? scores[a] > scores[b] : scores[a] < scores[b];
  });
  return idx;
}

double clamp_probability(double p) {
  return std::clamp(p, kProbabilityClamp, 1.0 - kProbabilityClamp);
}

}  // namespace

double log_loss(std::span<const std::uint8_t> labels, std::span<const double> probs) {
  check_lengths(labels.size(), probs.size());
  if (labels.empty()) return 0.0;
  double total = 0.0;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const double p = clamp_probability(probs[i]);
    total -= labels[i] ? std::log(p) : std::log(1.0 - p);
  }
  return total / static_cast<double>(labels.size());
}

double weighted_log_loss(std::span<const std::uint8_t> labels,
                         std::span<const double> probs,
                         std::span<const double> weights) {
  check_lengths(labels.size(), probs.size());
  check_lengths(labels.size(), weights.size());
  double total = 0.0, weight_sum = 0.0;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const double p = clamp_probability(probs[i]);
    total -= weights[i] * (labels[i] ? std::log(p) : std::log(1.0 - p));
    weight_sum += weights[i];
  }
  return weight_sum > 0.0 ? total / weight_sum : 0.0;
}

ConfusionMatrix confusion(std::span<const std::uint8_t> labels,
                          std::span<const double> probs, double threshold) {
  check_lengths(labels.size(), probs.size());
  ConfusionMatrix cm;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const bool predicted_bad = probs[i] >= threshold;
    if (labels[i]) {
      (predicted_bad ? cm.tp : cm.fn) += 1;
    } else {
      (predicted_bad ? cm.fp : cm.tn) += 1;
    }
  }
  return cm;
}

double precision(const ConfusionMatrix& cm) {
  if (cm.tp + cm.fp == 0) {
    throw Error(ErrorCode::kUndefinedPrecision, "no predicted positives");
  }
  return static_cast<double>(cm.tp) / static_cast<double>(cm.tp + cm.fp);
}

double recall(const ConfusionMatrix& cm) {
  if (cm.tp + cm.fn == 0) {
    throw Error(ErrorCode::kUndefinedRecall, "no actual positives");
  }
  return static_cast<double>(cm.tp) / static_cast<double>(cm.tp + cm.fn);
}

std::pair<double, double> precision_recall(const ConfusionMatrix& cm) {
  return {precision(cm), recall(cm)};
}

double fbeta(const ConfusionMatrix& cm, double beta) {
  const auto [p, r] = precision_recall(cm);
  const double b2 = beta * beta;
  const double denominator = b2 * p + r;
  return denominator > 0.0 ? (1.0 + b2) * p * r / denominator : 0.0;
}

CurveData roc_curve(std::span<const std::uint8_t> labels, std::span<const double> scores) {
  check_lengths(labels.size(), scores.size());
  const auto [pos, neg] = class_counts(labels);
  const auto idx = order_by_score(scores, /*descending=*/true);

  CurveData curve;
  curve.points.push_back({0.0, 0.0});
  std::int64_t tp = 0, fp = 0;
  // Twice the area in units of (pairs); halves stay exact in integers.
  std::int64_t doubled_area = 0;
  for (std::size_t i = 0; i < idx.size();) {
    const double s = scores[idx[i]];
    const std::int64_t tp_before = tp, fp_before = fp;
    for (; i < idx.size() && scores[idx[i]] == s; ++i) {
      (labels[idx[i]] ? tp : fp) += 1;
    }
    doubled_area += (fp - fp_before) * (tp + tp_before);
    curve.points.push_back({static_cast<double>(fp) / static_cast<double>(neg),
                            static_cast<double>(tp) / static_cast<double>(pos)});
  }
  curve.area = static_cast<double>(doubled_area) /
               (2.0 * static_cast<double>(pos) * static_cast<double>(neg));
  return curve;
}

CurveData pr_curve(std::span<const std::uint8_t> labels, std::span<const double> scores) {
  check_lengths(labels.size(), scores.size());
  const auto [pos, neg] = class_counts(labels);
  (void)neg;
  const auto idx = order_by_score(scores, /*descending=*/true);

  CurveData curve;
  curve.points.push_back({0.0, 1.0});
  std::int64_t tp = 0, predicted = 0;
  double previous_recall = 0.0;
  for (std::size_t i = 0; i < idx.size();) {
    const double s = scores[idx[i]];
    for (; i < idx.size() && scores[idx[i]] == s; ++i) {
      tp += labels[idx[i]];
      ++predicted;
    }
    const double r = static_cast<double>(tp) / static_cast<double>(pos);
    const double p = static_cast<double>(tp) / static_cast<double>(predicted);
    curve.area += (r - previous_recall) * p;
    previous_recall = r;
    curve.points.push_back({r, p});
  }
  return curve;
}

KsResult ks_statistic(std::span<const std::uint8_t> labels, std::span<const double> scores) {
  check_lengths(labels.size(), scores.size());
  const auto [bads, goods] = class_counts(labels);
  const auto idx = order_by_score(scores, /*descending=*/false);

  KsResult out;
  std::int64_t bad_seen = 0, good_seen = 0;
  double best_gap = -1.0;
  for (std::size_t i = 0; i < idx.size();) {
    const double s = scores[idx[i]];
    for (; i < idx.size() && scores[idx[i]] == s; ++i) {
      (labels[idx[i]] ? bad_seen : good_seen) += 1;
    }
    KsPoint point{s, static_cast<double>(bad_seen) / static_cast<double>(bads),
                  static_cast<double>(good_seen) / static_cast<double>(goods)};
    const double gap = std::abs(point.bad_cdf - point.good_cdf);
    if (gap > best_gap) {
      best_gap = gap;
      out.threshold = s;
    }
    out.points.push_back(point);
  }
  out.ks = 100.0 * best_gap;
  return out;
}

std::vector<ReliabilityBin> reliability_curve(std::span<const std::uint8_t> labels,
                                              std::span<const double> probs, int n_bins) {
  check_lengths(labels.size(), probs.size());
  if (n_bins < 1) {
    throw Error(ErrorCode::kInvalidBinCount, "n_bins must be >= 1");
  }
  const auto nb = static_cast<std::size_t>(n_bins);
  std::vector<double> prob_sum(nb, 0.0), bad_sum(nb, 0.0);
  std::vector<std::int64_t> count(nb, 0);
  for (std::size_t i = 0; i < probs.size(); ++i) {
    const double scaled = std::ceil(probs[i] * static_cast<double>(n_bins)) - 1.0;
    const auto bin = static_cast<std::size_t>(
        std::clamp(scaled, 0.0, static_cast<double>(n_bins - 1)));
    prob_sum[bin] += probs[i];
    bad_sum[bin] += labels[i];
    count[bin] += 1;
  }
  std::vector<ReliabilityBin> bins(nb);
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (std::size_t b = 0; b < nb; ++b) {
    bins[b].center = (static_cast<double>(b) + 0.5) / static_cast<double>(n_bins);
    bins[b].count = count[b];
    bins[b].mean_predicted = count[b] ? prob_sum[b] / static_cast<double>(count[b]) : nan;
    bins[b].observed_rate = count[b] ? bad_sum[b] / static_cast<double>(count[b]) : nan;
  }
  return bins;
}

EvalReport evaluate(std::span<const std::uint8_t> labels, std::span<const double> probs,
                    double threshold, double beta, int n_bins) {
  EvalReport r;
  r.ks = ks_statistic(labels, probs).ks;
  r.roc_auc = roc_curve(labels, probs).area;
  r.pr_auc = pr_curve(labels, probs).area;
  r.log_loss = log_loss(labels, probs);
  r.threshold = threshold;
  r.beta = beta;
  r.confusion = confusion(labels, probs, threshold);
  try {
    r.fbeta = fbeta(r.confusion, beta);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kUndefinedPrecision &&
        e.code() != ErrorCode::kUndefinedRecall) {
      throw;
    }
  }
  r.reliability = reliability_curve(labels, probs, n_bins);
  return r;
}

std::string eval_report_to_json(const EvalReport& report) {
  using nlohmann::json;
  auto real = [](double v) { return std::isfinite(v) ? json(v) : json(nullptr); };
  json bins = json::array();
  for (const ReliabilityBin& b : report.reliability) {
    bins.push_back({{"center", b.center},
                    {"mean_predicted", real(b.mean_predicted)},
                    {"observed_rate", real(b.observed_rate)},
                    {"count", b.count}});
  }
  const json doc{
      {"ks", report.ks},
      {"roc_auc", report.roc_auc},
      {"pr_auc", report.pr_auc},
      {"log_loss", report.log_loss},
      {"threshold", report.threshold},
      {"beta", report.beta},
      {"fbeta", report.fbeta ? json(*report.fbeta) : json(nullptr)},
      {"confusion",
       {{"tp", report.confusion.tp},
        {"fp", report.confusion.fp},
        {"tn", report.confusion.tn},
        {"fn", report.confusion.fn}}},
      {"reliability", std::move(bins)}};
  return doc.dump(2) + "\n";
}

std::string curve_to_csv(const CurveData& curve, const std::string& x_name,
                         const std::string& y_name) {
  std::ostringstream out;
  write_csv_row(out, {x_name, y_name});
  for (const CurvePoint& p : curve.points) {
    write_csv_row(out, {format_real(p.x), format_real(p.y)});
  }
  return out.str();
}

std::string ks_to_csv(const KsResult& ks) {
  std::ostringstream out;
  write_csv_row(out, {"threshold", "bad_cdf", "good_cdf", "gap"});
  for (const KsPoint& p : ks.points) {
    write_csv_row(out, {format_real(p.threshold), format_real(p.bad_cdf),
                        format_real(p.good_cdf),
                        format_real(100.0 * std::abs(p.bad_cdf - p.good_cdf))});
  }
  return out.str();
}

std::string reliability_to_csv(const std::vector<ReliabilityBin>& bins) {
  std::ostringstream out;
  write_csv_row(out, {"bin_center", "mean_predicted", "observed_rate", "count"});
  for (const ReliabilityBin& b : bins) {
    write_csv_row(out, {format_real(b.center),
                        b.defined() ? format_real(b.mean_predicted) : "",
                        b.defined() ? format_real(b.observed_rate) : "",
                        std::to_string(b.count)});
  }
  return out.str();
}

}  // namespace gbscore
