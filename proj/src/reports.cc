#include "gbscore/reports.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <sstream>

#include "gbscore/csv.h"
#include "gbscore/error.h"

namespace gbscore {

namespace {

// Scores oriented so that smaller = riskier.
std::vector<double> risk_order_scores(std::span<const double> scores, bool lower_is_riskier) {
  std::vector<double> out(scores.begin(), scores.end());
  if (!lower_is_riskier) {
    for (double& s : out) s = -s;
  }
  return out;
}

std::vector<char> worst_set(const std::vector<double>& oriented, double cutoff_pct,
                            double* cutoff_value) {
  const std::size_t n = oriented.size();
  std::vector<double> sorted = oriented;
  std::sort(sorted.begin(), sorted.end());
  // Guard against n * pct / 100 landing a hair above an integer.
  const double nominal = static_cast<double>(n) * cutoff_pct / 100.0;
  auto count = static_cast<std::size_t>(std::ceil(nominal - 1e-9));
  count = std::clamp<std::size_t>(count, 1, n);
  const double cutoff = sorted[count - 1];
  *cutoff_value = cutoff;
  std::vector<char> in(n);
  for (std::size_t i = 0; i < n; ++i) in[i] = oriented[i] <= cutoff;
  return in;
}

WorstSetCapture capture(const std::vector<char>& in, std::span<const std::uint8_t> labels) {
  WorstSetCapture c;
  for (std::size_t i = 0; i < in.size(); ++i) {
    if (!in[i]) continue;
    ++c.total;
    (labels[i] ? c.bads : c.goods) += 1;
  }
  c.bad_rate = c.total ? static_cast<double>(c.bads) / static_cast<double>(c.total) : 0.0;
  return c;
}

std::string percent(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f%%", 100.0 * v);
  return buf;
}

std::string pct_label(double pct) {
  std::string s = format_real(pct);
  return "Worst " + s + "%";
}

}  // namespace

SwapSetTable swap_set(std::span<const double> scores_a, std::span<const double> scores_b,
                      std::span<const std::uint8_t> labels, double cutoff_pct,
                      bool lower_is_riskier) {
  if (scores_a.size() != scores_b.size() || scores_a.size() != labels.size()) {
    throw Error(ErrorCode::kLengthMismatch, "scores and labels must have equal lengths");
  }
  if (!(cutoff_pct > 0.0 && cutoff_pct < 100.0)) {
    throw Error(ErrorCode::kInvalidArgument, "cutoff_pct must lie in (0,100)");
  }
  if (labels.empty()) throw Error(ErrorCode::kInvalidArgument, "no rows");

  SwapSetTable t;
  t.cutoff_pct = cutoff_pct;
  double cut_a = 0.0, cut_b = 0.0;
  const auto in_a = worst_set(risk_order_scores(scores_a, lower_is_riskier), cutoff_pct, &cut_a);
  const auto in_b = worst_set(risk_order_scores(scores_b, lower_is_riskier), cutoff_pct, &cut_b);
  t.model_a = capture(in_a, labels);
  t.model_b = capture(in_b, labels);
  t.model_a.score_cutoff = lower_is_riskier ? cut_a : -cut_a;
  t.model_b.score_cutoff = lower_is_riskier ? cut_b : -cut_b;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (in_a[i] && !in_b[i]) {
      ++t.swapped_in;
      t.swapped_in_bads += labels[i];
    } else if (in_b[i] && !in_a[i]) {
      ++t.swapped_out;
      t.swapped_out_bads += labels[i];
    }
  }
  return t;
}

std::vector<DistributionBin> score_distribution(std::span<const double> scores,
                                                std::span<const std::uint8_t> labels,
                                                int n_bins, bool lower_is_riskier) {
  if (n_bins < 1) throw Error(ErrorCode::kInvalidBinCount, "n_bins must be >= 1");
  if (scores.size() != labels.size()) {
    throw Error(ErrorCode::kLengthMismatch, "scores and labels must have equal lengths");
  }
  const std::vector<double> oriented = risk_order_scores(scores, lower_is_riskier);
  std::vector<std::size_t> idx(scores.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(),
                   [&](std::size_t a, std::size_t b) { return oriented[a] < oriented[b]; });

  const std::size_t n = idx.size();
  const auto nb = static_cast<std::size_t>(n_bins);
  std::vector<DistributionBin> bins;
  for (std::size_t b = 0; b < nb; ++b) {
    const std::size_t begin = b * n / nb;
    const std::size_t end = (b + 1) * n / nb;
    DistributionBin bin;
    bin.bin = static_cast<int>(b + 1);
    if (begin == end) {
      bin.min_score = bin.max_score = std::numeric_limits<double>::quiet_NaN();
    } else {
      double lo = scores[idx[begin]], hi = lo;
      for (std::size_t k = begin; k < end; ++k) {
        lo = std::min(lo, scores[idx[k]]);
        hi = std::max(hi, scores[idx[k]]);
        (labels[idx[k]] ? bin.bads : bin.goods) += 1;
      }
      bin.min_score = lo;
      bin.max_score = hi;
    }
    const std::int64_t total = bin.goods + bin.bads;
    bin.bad_rate = total ? static_cast<double>(bin.bads) / static_cast<double>(total) : 0.0;
    bins.push_back(bin);
  }
  return bins;
}

std::string swap_set_to_csv(const SwapSetTable& t, const std::string& name_a,
                            const std::string& name_b) {
  std::ostringstream out;
  write_csv_row(out, {"row", name_a, name_b});
  write_csv_row(out, {pct_label(t.cutoff_pct) + " bad_rate", format_real(t.model_a.bad_rate),
                      format_real(t.model_b.bad_rate)});
  write_csv_row(out, {"total", std::to_string(t.model_a.total), std::to_string(t.model_b.total)});
  write_csv_row(out, {"bads", std::to_string(t.model_a.bads), std::to_string(t.model_b.bads)});
  write_csv_row(out, {"goods", std::to_string(t.model_a.goods), std::to_string(t.model_b.goods)});
  write_csv_row(out, {"score_cutoff", format_real(t.model_a.score_cutoff),
                      format_real(t.model_b.score_cutoff)});
  write_csv_row(out, {"swapped_in", std::to_string(t.swapped_in), std::to_string(t.swapped_out)});
  write_csv_row(out, {"swapped_in_bads", std::to_string(t.swapped_in_bads),
                      std::to_string(t.swapped_out_bads)});
  return out.str();
}

std::string swap_set_to_text(const SwapSetTable& t, const std::string& name_a,
                             const std::string& name_b) {
  const std::vector<std::vector<std::string>> rows = {
      {"", name_a, name_b},
      {pct_label(t.cutoff_pct), percent(t.model_a.bad_rate), percent(t.model_b.bad_rate)},
      {"Total", std::to_string(t.model_a.total), std::to_string(t.model_b.total)},
      {"Bads", std::to_string(t.model_a.bads), std::to_string(t.model_b.bads)},
      {"Goods", std::to_string(t.model_a.goods), std::to_string(t.model_b.goods)},
      {"Swapped in", std::to_string(t.swapped_in), std::to_string(t.swapped_out)},
  };
  std::size_t width[3] = {0, 0, 0};
  for (const auto& r : rows) {
    for (std::size_t c = 0; c < 3; ++c) width[c] = std::max(width[c], r[c].size());
  }
  std::ostringstream out;
  for (const auto& r : rows) {
    out << r[0] << std::string(width[0] - r[0].size(), ' ');
    for (std::size_t c = 1; c < 3; ++c) {
      out << "  " << std::string(width[c] - r[c].size(), ' ') << r[c];
    }
    out << '\n';
  }
  return out.str();
}

std::string distribution_to_csv(const std::vector<DistributionBin>& bins) {
  std::ostringstream out;
  write_csv_row(out, {"bin", "min_score", "max_score", "goods", "bads", "bad_rate"});
  for (const DistributionBin& b : bins) {
    write_csv_row(out, {std::to_string(b.bin), format_real(b.min_score),
                        format_real(b.max_score), std::to_string(b.goods),
                        std::to_string(b.bads), format_real(b.bad_rate)});
  }
  return out.str();
}

std::string distribution_to_text(const std::vector<DistributionBin>& bins) {
  std::ostringstream out;
  char line[160];
  std::snprintf(line, sizeof(line), "%4s  %12s  %12s  %8s  %8s  %9s\n", "bin", "min_score",
                "max_score", "goods", "bads", "bad_rate");
  out << line;
  for (const DistributionBin& b : bins) {
    std::snprintf(line, sizeof(line), "%4d  %12.6g  %12.6g  %8lld  %8lld  %9s\n", b.bin,
                  b.min_score, b.max_score, static_cast<long long>(b.goods),
                  static_cast<long long>(b.bads), percent(b.bad_rate).c_str());
    out << line;
  }
  return out.str();
}

}  // namespace gbscore
