#include "gbscore/explain.h"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "gbscore/error.h"
#include "gbscore/random.h"
#include "test_util.h"

namespace gbscore {
namespace {

using Row = std::vector<double>;

BackgroundSet background(std::vector<Row> rows) {
  BackgroundSet bg;
  bg.rows = std::move(rows);
  return bg;
}

// Value of a coalition given as a present-flag vector, computed directly.
double direct_value(const Scorer& f, const Row& x, const std::vector<bool>& present,
                    const BackgroundSet& bg) {
  double total = 0.0;
  for (const Row& b : bg.rows) {
    Row z = b;
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (present[i]) z[i] = x[i];
    }
    total += f(z);
  }
  return total / static_cast<double>(bg.rows.size());
}

// Average marginal contribution over all feature orderings.
std::vector<double> permutation_shapley(const Scorer& f, const Row& x, const BackgroundSet& bg) {
  const std::size_t m = x.size();
  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), 0);
  std::vector<double> phi(m, 0.0);
  double count = 0.0;
  do {
    std::vector<bool> present(m, false);
    double before = direct_value(f, x, present, bg);
    for (std::size_t i : order) {
      present[i] = true;
      const double after = direct_value(f, x, present, bg);
      phi[i] += after - before;
      before = after;
    }
    count += 1;
  } while (std::next_permutation(order.begin(), order.end()));
  for (double& p : phi) p /= count;
  return phi;
}

Row random_row(Rng& rng, std::size_t m) {
  Row r(m);
  for (double& v : r) v = rng.uniform01() * 4 - 2;
  return r;
}

TEST(ShapleyTest, ConstantScorer) {
  const Scorer f = [](std::span<const double>) { return 1.75; };
  const Attribution a = shapley_exact(f, Row{1, 2, 3}, background({{0, 0, 0}, {5, 5, 5}}));
  EXPECT_EQ(a.phi0, 1.75);
  for (double p : a.phi) EXPECT_EQ(p, 0.0);
  EXPECT_EQ(a.output, 1.75);
}

TEST(ShapleyTest, LinearScorer) {
  const Scorer f = [](std::span<const double> z) { return z[0] + 2.0 * z[1]; };
  const Attribution a = shapley_exact(f, Row{3, 1}, background({{-1, 2}, {1, -2}}));
  EXPECT_NEAR(a.phi[0], 3.0, 1e-12);
  EXPECT_NEAR(a.phi[1], 2.0, 1e-12);
  EXPECT_NEAR(a.phi0, 0.0, 1e-12);
  EXPECT_EQ(a.feature_names, (std::vector<std::string>{"f0", "f1"}));
}

TEST(ShapleyTest, SingleSplitTree) {
  const double lo = -0.4, hi = 0.9;
  const Scorer f = [&](std::span<const double> z) { return z[0] < 1.0 ? lo : hi; };
  const Attribution a = shapley_exact(f, Row{2.0, 7.0}, background({{0.0, 3.0}}));
  EXPECT_NEAR(a.phi[0], hi - lo, 1e-15);
  EXPECT_EQ(a.phi[1], 0.0);
}

TEST(ShapleyTest, MatchesPermutationOracle) {
  Rng rng(1);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t m = 1 + rng.uniform_index(5);
    Row w = random_row(rng, m);
    const Scorer f = [w](std::span<const double> z) {
      double s = 0.0;
      for (std::size_t i = 0; i < z.size(); ++i) s += w[i] * z[i] * (i ? z[i - 1] : 1.0);
      return std::tanh(s);
    };
    std::vector<Row> rows;
    for (int k = 0; k < 4; ++k) rows.push_back(random_row(rng, m));
    const BackgroundSet bg = background(rows);
    const Row x = random_row(rng, m);
    const Attribution a = shapley_exact(f, x, bg);
    const std::vector<double> oracle = permutation_shapley(f, x, bg);
    for (std::size_t i = 0; i < m; ++i) EXPECT_NEAR(a.phi[i], oracle[i], 1e-12);
  }
}

TEST(CoalitionTest, FullEmptyAndHalf) {
  const Scorer f = [](std::span<const double> z) { return z[0] * 10 + z[1]; };
  const BackgroundSet bg = background({{1, 2}, {3, 4}});
  const Row x = {5, 6};
  EXPECT_EQ(coalition_value(f, x, CoalitionMask::full(2), bg), 56.0);
  EXPECT_EQ(coalition_value(f, x, CoalitionMask{0, 2}, bg), (12.0 + 34.0) / 2);
  EXPECT_EQ(coalition_value(f, x, CoalitionMask{1, 2}, bg), (52.0 + 54.0) / 2);
  EXPECT_EQ(coalition_value(f, x, CoalitionMask{2, 2}, bg), (16.0 + 36.0) / 2);
}

TEST(CoalitionTest, Errors) {
  const Scorer f = [](std::span<const double>) { return 0.0; };
  try {
    coalition_value(f, Row{1}, CoalitionMask{0, 1}, BackgroundSet{});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kEmptyBackground);
  }
  try {
    shapley_exact(f, Row(17, 0.0), background({Row(17, 0.0)}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kTooManyFeatures);
  }
}

TEST(AxiomTest, HoldForExactAndFailWhenPerturbed) {
  const Scorer f = [](std::span<const double> z) { return z[0] * z[1] + std::sin(z[2]); };
  // Feature 2 equals x in every background row.
  const BackgroundSet bg = background({{0.5, 1.0, 0.3}, {-1.0, 2.0, 0.3}});
  const Row x = {1.5, -0.5, 0.3};
  Attribution a = shapley_exact(f, x, bg);
  AxiomReport r = verify_axioms(f, x, bg, a);
  EXPECT_TRUE(r.local_accuracy);
  EXPECT_TRUE(r.missingness);
  EXPECT_EQ(r.inert_features, (std::vector<std::size_t>{2}));
  EXPECT_EQ(a.phi[2], 0.0);

  a.phi[0] += 1e-6;
  EXPECT_FALSE(verify_axioms(f, x, bg, a).local_accuracy);
  a.phi[0] -= 1e-6;
  a.phi[2] = 1e-3;
  a.phi[1] -= 1e-3;
  r = verify_axioms(f, x, bg, a);
  EXPECT_TRUE(r.local_accuracy);
  EXPECT_FALSE(r.missingness);
}

TEST(AxiomTest, Symmetry) {
  const Scorer f = [](std::span<const double> z) { return z[0] * z[1] + z[2]; };
  const BackgroundSet bg = background({{1, 1, 0}, {-2, -2, 4}});
  const Attribution a = shapley_exact(f, Row{3, 3, 1}, bg);
  EXPECT_EQ(a.phi[0], a.phi[1]);
}

TEST(AxiomTest, Consistency) {
  Rng rng(2);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t m = 1 + rng.uniform_index(4);
    const Row w = random_row(rng, m);
    const double extra = rng.uniform01() * 3;
    // g adds extra * z0 * 1[z0 > 0]; with x0 above every background value
    // the marginal contribution of feature 0 only grows.
    const Scorer f = [w](std::span<const double> z) {
      double s = 0.0;
      for (std::size_t i = 0; i < z.size(); ++i) s += w[i] * z[i];
      return s + 0.5 * z[0] * z[z.size() - 1];
    };
    const Scorer g = [f, extra](std::span<const double> z) {
      return f(z) + extra * std::max(z[0], 0.0);
    };
    std::vector<Row> rows;
    for (int k = 0; k < 3; ++k) {
      Row b = random_row(rng, m);
      b[0] = std::min(b[0], 0.0);
      rows.push_back(b);
    }
    Row x = random_row(rng, m);
    x[0] = 2.5;
    const BackgroundSet bg = background(rows);
    EXPECT_GE(shapley_exact(g, x, bg).phi[0], shapley_exact(f, x, bg).phi[0] - 1e-12);
  }
}

TEST(ModelShapleyTest, SumsToModelMargin) {
  Rng rng(3);
  const Dataset d = testing::random_dataset(rng, 300, 5, 0.1);
  TrainConfig cfg;
  cfg.n_rounds = 10;
  cfg.max_depth = 3;
  const BoostedModel m = train(d, cfg);
  const FeatureMatrix x = model_features(m, d);
  const BackgroundSet bg = make_background(x, 20, 4);
  EXPECT_EQ(bg.rows.size(), 20u);
  const Scorer f = margin_scorer(m);
  for (std::size_t r = 0; r < 10; ++r) {
    const Row row = x.row(r);
    const Attribution a = shapley_exact(f, row, bg, m.feature_names);
    double total = a.phi0;
    for (double p : a.phi) total += p;
    EXPECT_NEAR(total, predict_margin(m, row), 1e-9);
    EXPECT_EQ(a.output, predict_margin(m, row));
  }
}

std::vector<Attribution> explain_rows(const Scorer& f, const std::vector<Row>& xs,
                                      const BackgroundSet& bg) {
  std::vector<Attribution> out;
  for (const Row& x : xs) out.push_back(shapley_exact(f, x, bg, {"a", "b", "c"}));
  return out;
}

TEST(SummaryTest, UnusedFeatureLastAndTwinsShare) {
  // b duplicates a in every row; c is ignored.
  const Scorer f = [](std::span<const double> z) { return z[0] + z[1]; };
  const BackgroundSet bg = background({{0, 0, 1}, {1, 1, 2}});
  const auto atts = explain_rows(f, {{2, 2, 5}, {-1, -1, 0}, {3, 3, 3}}, bg);
  const auto summary = summary_data(atts);
  ASSERT_EQ(summary.size(), 3u);
  EXPECT_EQ(summary[2].name, "c");
  EXPECT_EQ(summary[2].mean_abs_phi, 0.0);
  EXPECT_EQ(summary[0].mean_abs_phi, summary[1].mean_abs_phi);
  EXPECT_EQ(summary[0].name, "a");
  EXPECT_EQ(summary[0].points.size(), 3u);
  EXPECT_EQ(summary[0].points[0].second, 2.0);
}

TEST(SummaryTest, RankingStableUnderRowPermutation) {
  Rng rng(4);
  const Scorer f = [](std::span<const double> z) { return 3 * z[0] - z[1] * z[2]; };
  std::vector<Row> xs, bgs;
  for (int i = 0; i < 6; ++i) xs.push_back(random_row(rng, 3));
  for (int i = 0; i < 4; ++i) bgs.push_back(random_row(rng, 3));
  const auto bg = background(bgs);
  auto atts = explain_rows(f, xs, bg);
  const auto before = summary_data(atts);
  std::reverse(atts.begin(), atts.end());
  const auto after = summary_data(atts);
  for (std::size_t i = 0; i < before.size(); ++i) {
    EXPECT_EQ(before[i].name, after[i].name);
    EXPECT_NEAR(before[i].mean_abs_phi, after[i].mean_abs_phi, 1e-12);
  }
}

TEST(DependenceTest, OneRowPerAttribution) {
  const Scorer f = [](std::span<const double> z) { return z[0] * z[2]; };
  const auto atts = explain_rows(f, {{1, 2, 3}, {4, 5, 6}}, background({{0, 0, 0}}));
  const auto rows = dependence_data(atts, "a", "c");
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[1].value, 4.0);
  EXPECT_EQ(rows[1].phi, atts[1].phi[0]);
  EXPECT_EQ(rows[1].color_value, 6.0);
  try {
    dependence_data(atts, "zzz", "c");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kUnknownFeature);
  }
  EXPECT_EQ(dependence_to_csv(rows, "a", "c").substr(0, 2), "a,");
}

TEST(ForceTest, OrderingAndReconstruction) {
  Attribution a;
  a.phi0 = -1.0;
  a.phi = {0.2, -0.7, 0.0, 0.5};
  a.feature_names = {"w", "x", "y", "z"};
  a.feature_values = {0, 0, 0, 0};
  const ForceData force = force_data(a);
  ASSERT_EQ(force.pushes.size(), 3u);
  EXPECT_EQ(force.pushes[0].feature, "x");
  EXPECT_EQ(force.pushes[0].direction, -1);
  EXPECT_EQ(force.pushes[1].feature, "z");
  EXPECT_EQ(force.pushes[2].feature, "w");
  double total = force.base_value;
  for (const ForcePush& p : force.pushes) total += p.phi;
  EXPECT_NEAR(total, force.output_value, 1e-15);
  EXPECT_NEAR(force.output_value, -1.0, 1e-15);

  a.phi = {0, 0, 0, 0};
  EXPECT_TRUE(force_data(a).pushes.empty());
}

}  // namespace
}  // namespace gbscore
