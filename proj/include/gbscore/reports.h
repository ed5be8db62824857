#ifndef GBSCORE_REPORTS_H_
#define GBSCORE_REPORTS_H_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace gbscore {

struct WorstSetCapture {
  std::int64_t total = 0;
  std::int64_t bads = 0;
  std::int64_t goods = 0;
  double bad_rate = 0.0;
  double score_cutoff = 0.0;  // in the caller's score units
};

struct SwapSetTable {
  double cutoff_pct = 0.0;
  WorstSetCapture model_a;
  WorstSetCapture model_b;
  // Rows in A's worst set but not B's (swapped in by A), and vice versa.
  std::int64_t swapped_in = 0;
  std::int64_t swapped_out = 0;
  std::int64_t swapped_in_bads = 0;
  std::int64_t swapped_out_bads = 0;
};

// Worst set per model = rows scoring at or below that model's
// cutoff_pct-quantile (the ceil(n * pct / 100)-th riskiest score); ties at the
// cutoff are included, so a set may exceed the nominal size.
// lower_is_riskier = false treats scores as PD-like (higher = riskier).
// Errors: LengthMismatch, InvalidArgument.
SwapSetTable swap_set(std::span<const double> scores_a, std::span<const double> scores_b,
                      std::span<const std::uint8_t> labels, double cutoff_pct,
                      bool lower_is_riskier = true);

struct DistributionBin {
  int bin = 0;  // 1 = riskiest
  double min_score = 0.0;
  double max_score = 0.0;
  std::int64_t goods = 0;
  std::int64_t bads = 0;
  double bad_rate = 0.0;
};

// Equal-count bins ordered from riskiest to safest; counts differ by at most
// one. Errors: InvalidBinCount, LengthMismatch.
std::vector<DistributionBin> score_distribution(std::span<const double> scores,
                                                std::span<const std::uint8_t> labels,
                                                int n_bins, bool lower_is_riskier = true);

std::string swap_set_to_csv(const SwapSetTable& t, const std::string& name_a = "model_a",
                            const std::string& name_b = "model_b");
// Aligned text laid out like a bank swap-set table (Worst x%, Total, Bads, Goods).
std::string swap_set_to_text(const SwapSetTable& t, const std::string& name_a = "model_a",
                             const std::string& name_b = "model_b");
std::string distribution_to_csv(const std::vector<DistributionBin>& bins);
std::string distribution_to_text(const std::vector<DistributionBin>& bins);

}  // namespace gbscore

#endif  // GBSCORE_REPORTS_H_
