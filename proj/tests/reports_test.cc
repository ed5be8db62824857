#include "gbscore/reports.h"

#include <gtest/gtest.h>

#include <cmath>

#include "gbscore/error.h"
#include "gbscore/random.h"

namespace gbscore {
namespace {

using Labels = std::vector<std::uint8_t>;
using Scores = std::vector<double>;

// Row i is in the worst set when fewer than ceil(n p / 100) rows score
// strictly riskier.
std::vector<bool> oracle_worst(const Scores& s, double pct) {
  const auto count = static_cast<std::size_t>(std::ceil(s.size() * pct / 100.0 - 1e-9));
  std::vector<bool> in(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    std::size_t riskier = 0;
    for (double v : s) riskier += v < s[i];
    in[i] = riskier < std::max<std::size_t>(count, 1);
  }
  return in;
}

TEST(SwapSetTest, IdenticalScoresNoSwaps) {
  Rng rng(1);
  Scores s(100);
  Labels y(100);
  for (std::size_t i = 0; i < s.size(); ++i) {
    s[i] = rng.uniform01();
    y[i] = static_cast<std::uint8_t>(rng.uniform_index(2));
  }
  const SwapSetTable t = swap_set(s, s, y, 20);
  EXPECT_EQ(t.swapped_in, 0);
  EXPECT_EQ(t.swapped_out, 0);
  EXPECT_EQ(t.model_a.total, 20);
  EXPECT_EQ(t.model_a.bads, t.model_b.bads);
}

TEST(SwapSetTest, AllBadsWorstInOneModel) {
  // 50 rows, 5 bads; model A scores the bads lowest, model B highest.
  Scores a(50), b(50);
  Labels y(50, 0);
  for (std::size_t i = 0; i < 50; ++i) {
    y[i] = i < 5;
    a[i] = static_cast<double>(i);
    b[i] = 100.0 - static_cast<double>(i) + (i < 5 ? 100.0 : 0.0);
  }
  const SwapSetTable t = swap_set(a, b, y, 10);
  EXPECT_EQ(t.model_a.total, 5);
  EXPECT_EQ(t.model_a.bads, 5);
  EXPECT_EQ(t.model_b.bads, 0);
  EXPECT_EQ(t.model_a.bad_rate, 1.0);
  EXPECT_EQ(t.swapped_in, 5);
  EXPECT_EQ(t.swapped_in_bads, 5);
  EXPECT_EQ(t.swapped_out_bads, 0);
}

TEST(SwapSetTest, MatchesOracleSymmetryAndConservation) {
  Rng rng(2);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 5 + rng.uniform_index(200);
    Scores a(n), b(n);
    Labels y(n);
    for (std::size_t i = 0; i < n; ++i) {
      a[i] = static_cast<double>(rng.uniform_index(30));
      b[i] = static_cast<double>(rng.uniform_index(30));
      y[i] = rng.uniform01() < 0.2;
    }
    const double pct = 1.0 + rng.uniform01() * 98.0;
    const SwapSetTable t = swap_set(a, b, y, pct);
    const auto in_a = oracle_worst(a, pct), in_b = oracle_worst(b, pct);
    std::int64_t total_a = 0, bads_b = 0, only_a = 0, only_b_bads = 0;
    for (std::size_t i = 0; i < n; ++i) {
      total_a += in_a[i];
      bads_b += in_b[i] && y[i];
      only_a += in_a[i] && !in_b[i];
      only_b_bads += in_b[i] && !in_a[i] && y[i];
    }
    EXPECT_EQ(t.model_a.total, total_a);
    EXPECT_EQ(t.model_b.bads, bads_b);
    EXPECT_EQ(t.swapped_in, only_a);
    EXPECT_EQ(t.swapped_out_bads, only_b_bads);
    EXPECT_EQ(t.model_a.bads + t.model_a.goods, t.model_a.total);

    // Overlap is shared: removing each model's exclusive rows leaves equal sets.
    EXPECT_EQ(t.model_a.total - t.swapped_in, t.model_b.total - t.swapped_out);
    EXPECT_EQ(t.model_a.bads - t.swapped_in_bads, t.model_b.bads - t.swapped_out_bads);

    const SwapSetTable r = swap_set(b, a, y, pct);
    EXPECT_EQ(r.swapped_in, t.swapped_out);
    EXPECT_EQ(r.swapped_out_bads, t.swapped_in_bads);
    EXPECT_EQ(r.model_a.total, t.model_b.total);
  }
}

TEST(SwapSetTest, TiesAtCutoffAreIncluded) {
  const Scores a = {1, 2, 2, 2, 5, 6, 7, 8, 9, 10};
  const Labels y = {0, 1, 0, 0, 0, 0, 0, 0, 0, 1};
  const SwapSetTable t = swap_set(a, a, y, 20);
  EXPECT_EQ(t.model_a.total, 4);
  EXPECT_EQ(t.model_a.score_cutoff, 2.0);
}

TEST(SwapSetTest, HigherIsRiskierOrientation) {
  const Scores p = {0.9, 0.1, 0.2, 0.8};
  const Labels y = {1, 0, 0, 1};
  const SwapSetTable t = swap_set(p, p, y, 50, /*lower_is_riskier=*/false);
  EXPECT_EQ(t.model_a.bads, 2);
  EXPECT_EQ(t.model_a.score_cutoff, 0.8);
}

TEST(SwapSetTest, Errors) {
  const Scores s = {1, 2};
  EXPECT_THROW(swap_set(s, s, Labels{1}, 10), Error);
  try {
    swap_set(s, s, Labels{1, 0}, 100);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInvalidArgument);
  }
}

TEST(SwapSetTest, TextLayout) {
  const SwapSetTable t = swap_set(Scores{1, 2, 3, 4}, Scores{4, 3, 2, 1}, Labels{1, 0, 0, 1}, 25);
  const std::string text = swap_set_to_text(t, "old", "new");
  for (const char* field : {"Worst 25%", "Total", "Bads", "Goods", "old", "new"}) {
    EXPECT_NE(text.find(field), std::string::npos) << field;
  }
  // Every line has the same width.
  std::size_t width = text.find('\n');
  for (std::size_t pos = 0; pos < text.size();) {
    const std::size_t end = text.find('\n', pos);
    EXPECT_EQ(end - pos, width);
    pos = end + 1;
  }
  EXPECT_EQ(swap_set_to_csv(t, "old", "new").substr(0, 12), "row,old,new\n");
}

TEST(DistributionTest, EqualCountBins) {
  Rng rng(3);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t n = 1 + rng.uniform_index(300);
    const int nb = 1 + static_cast<int>(rng.uniform_index(15));
    Scores s(n);
    Labels y(n);
    for (std::size_t i = 0; i < n; ++i) {
      s[i] = rng.uniform01();
      y[i] = static_cast<std::uint8_t>(rng.uniform_index(2));
    }
    const auto bins = score_distribution(s, y, nb);
    ASSERT_EQ(bins.size(), static_cast<std::size_t>(nb));
    std::int64_t lo = static_cast<std::int64_t>(n), hi = 0, total = 0;
    for (const DistributionBin& b : bins) {
      lo = std::min(lo, b.goods + b.bads);
      hi = std::max(hi, b.goods + b.bads);
      total += b.goods + b.bads;
    }
    EXPECT_LE(hi - lo, 1);
    EXPECT_EQ(total, static_cast<std::int64_t>(n));
  }
}

TEST(DistributionTest, PerfectScoreGivesMonotoneBadRate) {
  // Lower score = riskier; all bads score below all goods.
  Scores s;
  Labels y;
  for (int i = 0; i < 100; ++i) {
    s.push_back(i);
    y.push_back(i < 30);
  }
  const auto bins = score_distribution(s, y, 10);
  EXPECT_EQ(bins[0].bin, 1);
  EXPECT_EQ(bins[0].bad_rate, 1.0);
  EXPECT_EQ(bins[0].max_score, 9.0);
  for (std::size_t b = 1; b < bins.size(); ++b) {
    EXPECT_LE(bins[b].bad_rate, bins[b - 1].bad_rate);
  }
  EXPECT_NE(distribution_to_text(bins).find("bad_rate"), std::string::npos);
  EXPECT_EQ(distribution_to_csv(bins).substr(0, 4), "bin,");
}

TEST(DistributionTest, InvalidBinCount) {
  try {
    score_distribution(Scores{1}, Labels{1}, 0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInvalidBinCount);
  }
}

}  // namespace
}  // namespace gbscore
