// Acceptance runner: one PASS/FAIL line per criterion, nonzero exit on any
// failure.
#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <numeric>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "gbscore/booster.h"
#include "gbscore/dataset.h"
#include "gbscore/encoding.h"
#include "gbscore/error.h"
#include "gbscore/explain.h"
#include "gbscore/metrics.h"
#include "gbscore/random.h"
#include "gbscore/sampling.h"
#include "gbscore/synthetic.h"
#include "gbscore/validation.h"
#include "../test_util.h"

namespace gbscore {
namespace {

namespace fs = std::filesystem;
using testing::random_dataset;
using testing::read_file;
using testing::write_file;

struct Outcome {
  bool pass = true;
  std::string detail;
};

// Collects the first few failure messages of a criterion.
class Check {
 public:
  void expect(bool ok, const std::string& what) {
    if (ok) return;
    ++failures_;
    if (failures_ <= 3) messages_ += (messages_.empty() ? "" : "; ") + what;
  }
  Outcome outcome(const std::string& summary) const {
    if (failures_ == 0) return {true, summary};
    return {false, std::to_string(failures_) + " failure(s): " + messages_};
  }

 private:
  int failures_ = 0;
  std::string messages_;
};

std::string num(double v) {
  std::ostringstream s;
  s.precision(6);
  s << v;
  return s.str();
}

// ---- 1. Shapley axioms ---------------------------------------------------

BoostedModel small_model(Rng& rng, std::size_t m, std::uint64_t seed) {
  const Dataset d = random_dataset(rng, 120, m, 0.05);
  TrainConfig cfg;
  cfg.n_rounds = 6;
  cfg.max_depth = 3;
  cfg.seed = seed;
  return train(d, cfg);
}

std::vector<double> random_row(Rng& rng, std::size_t m) {
  std::vector<double> r(m);
  for (double& v : r) v = rng.uniform01() * 4 - 2;
  return r;
}

// v(S) for every subset, from direct composite-row averaging.
std::vector<double> all_values(const Scorer& f, const std::vector<double>& x,
                               const BackgroundSet& bg) {
  const std::size_t m = x.size();
  std::vector<double> v(std::size_t{1} << m);
  for (std::size_t s = 0; s < v.size(); ++s) {
    double total = 0.0;
    for (const auto& b : bg.rows) {
      std::vector<double> z = b;
      for (std::size_t i = 0; i < m; ++i) {
        if ((s >> i) & 1u) z[i] = x[i];
      }
      total += f(z);
    }
    v[s] = total / static_cast<double>(bg.rows.size());
  }
  return v;
}

Outcome criterion_shapley() {
  Check check;
  Rng rng(101);
  double worst = 0.0;
  for (int t = 0; t < 200; ++t) {
    const std::size_t m = 1 + rng.uniform_index(8);
    const BoostedModel model = small_model(rng, m, static_cast<std::uint64_t>(t));
    const Scorer f = margin_scorer(model);
    std::vector<double> x = random_row(rng, m);
    if (rng.uniform01() < 0.2) x[rng.uniform_index(m)] = std::nan("");
    BackgroundSet bg;
    const std::size_t bg_size = 1 + rng.uniform_index(12);
    for (std::size_t k = 0; k < bg_size; ++k) bg.rows.push_back(random_row(rng, m));
    // One feature shares x's value in every background row.
    const std::size_t inert = rng.uniform_index(m);
    for (auto& b : bg.rows) b[inert] = x[inert];

    const Attribution a = shapley_exact(f, x, bg, model.feature_names);
    const AxiomReport r = verify_axioms(f, x, bg, a);
    worst = std::max(worst, r.residual);
    check.expect(r.residual < 1e-9, "triple " + std::to_string(t) + " residual " + num(r.residual));
    check.expect(a.phi[inert] == 0.0,
                 "triple " + std::to_string(t) + " inert phi " + num(a.phi[inert]));
  }

  int violations = 0;
  for (int t = 0; t < 50; ++t) {
    const std::size_t m = 1 + rng.uniform_index(4);
    const BoostedModel model = small_model(rng, m, 1000 + static_cast<std::uint64_t>(t));
    const Scorer f = margin_scorer(model);
    const std::size_t i = rng.uniform_index(m);
    const double c = 0.1 + rng.uniform01();
    // f' = f + c * 1[z_i > 0]: feature i's marginal contribution never shrinks.
    const Scorer g = [f, i, c](std::span<const double> z) {
      return f(z) + (z[i] > 0.0 ? c : 0.0);
    };
    std::vector<double> x = random_row(rng, m);
    x[i] = 1.0 + rng.uniform01();
    BackgroundSet bg;
    for (int k = 0; k < 6; ++k) bg.rows.push_back(random_row(rng, m));
    bg.rows[0][i] = -1.0;

    // Confirm domination on every coalition before comparing attributions.
    const auto vf = all_values(f, x, bg), vg = all_values(g, x, bg);
    const std::size_t bit = std::size_t{1} << i;
    for (std::size_t s = 0; s < vf.size(); ++s) {
      if (s & bit) continue;
      check.expect(vg[s | bit] - vg[s] >= vf[s | bit] - vf[s] - 1e-12,
                   "pair " + std::to_string(t) + " is not dominating");
    }
    const double phi_f = shapley_exact(f, x, bg).phi[i];
    const double phi_g = shapley_exact(g, x, bg).phi[i];
    if (!(phi_g >= phi_f)) ++violations;
  }
  check.expect(violations == 0, std::to_string(violations) + " consistency violations");
  return check.outcome("200 triples, max residual " + num(worst) +
                       ", missingness exact; 50 pairs, 0 consistency violations");
}

// ---- 2. Booster oracle equivalence ---------------------------------------

Outcome criterion_newton_step() {
  Check check;
  Rng rng(202);
  double worst = 0.0;
  for (int t = 0; t < 100; ++t) {
    const Dataset d = random_dataset(rng, 20 + rng.uniform_index(300), 1 + rng.uniform_index(4));
    TrainConfig cfg;
    cfg.n_rounds = 1;
    cfg.gamma = 1e300;  // no split can pay for itself
    cfg.lambda = rng.uniform01() * 3;
    cfg.base_score = 0.1 + 0.8 * rng.uniform01();
    cfg.learning_rate = 0.05 + 0.95 * rng.uniform01();
    const BoostedModel m = train(d, cfg);

    const double p = cfg.base_score;
    double g = 0.0, h = 0.0;
    for (std::uint8_t y : d.labels()) {
      g += p - y;
      h += p * (1 - p);
    }
    const double expected = -g / (h + cfg.lambda);
    check.expect(m.trees.size() == 1 && m.trees[0].nodes().size() == 1,
                 "dataset " + std::to_string(t) + " grew a split");
    const double leaf = m.trees[0].nodes()[0].leaf;
    const double err = std::abs(leaf - expected);
    worst = std::max(worst, err);
    check.expect(err <= 1e-12, "dataset " + std::to_string(t) + " error " + num(err));
  }

  std::size_t leaves = 0;
  for (int t = 0; t < 20; ++t) {
    const Dataset d = random_dataset(rng, 300, 4, 0.1);
    TrainConfig cfg;
    cfg.n_rounds = 20;
    cfg.max_depth = 4;
    cfg.lambda = 0.0;
    cfg.min_child_weight = 0.0;
    cfg.max_delta_step = 0.3;
    cfg.seed = static_cast<std::uint64_t>(t);
    for (const RegressionTree& tree : train(d, cfg).trees) {
      for (const TreeNode& n : tree.nodes()) {
        if (!n.is_leaf()) continue;
        ++leaves;
        check.expect(std::abs(n.leaf) <= 0.3, "leaf " + num(n.leaf) + " exceeds cap");
      }
    }
  }
  return check.outcome("100 datasets, max |w - newton| " + num(worst) + "; " +
                       std::to_string(leaves) + " capped leaves all within 0.3");
}

// ---- 3. Monotone training loss -------------------------------------------

Outcome criterion_monotone_loss() {
  Check check;
  Rng rng(303);
  int increases = 0;
  for (int t = 0; t < 20; ++t) {
    const Dataset d = random_dataset(rng, 100 + rng.uniform_index(400), 1 + rng.uniform_index(5),
                                     0.1);
    TrainConfig cfg;
    cfg.n_rounds = 30;
    cfg.learning_rate = 0.1 + 0.9 * rng.uniform01();
    cfg.max_depth = 1 + static_cast<int>(rng.uniform_index(5));
    cfg.lambda = 0.5 + 1.5 * rng.uniform01();
    cfg.seed = static_cast<std::uint64_t>(t);
    TrainingHistory history;
    TrainOptions options;
    options.history = &history;
    const BoostedModel m = train(d, cfg, options);
    std::vector<double> losses = {
        log_loss(d.labels(), std::vector<double>(d.row_count(), m.base_score))};
    losses.insert(losses.end(), history.train_loss.begin(), history.train_loss.end());
    for (std::size_t r = 1; r < losses.size(); ++r) {
      if (losses[r] > losses[r - 1]) {
        ++increases;
        check.expect(false, "dataset " + std::to_string(t) + " round " + std::to_string(r) +
                                ": " + num(losses[r - 1]) + " -> " + num(losses[r]));
      }
    }
  }
  return check.outcome("20 datasets x 30 rounds, " + std::to_string(increases) + " increases");
}

// ---- 4. Metric oracles ---------------------------------------------------

Outcome criterion_metrics() {
  Check check;
  Rng rng(404);
  double worst_roc = 0.0, worst_ks = 0.0, worst_pr = 0.0;
  for (int t = 0; t < 100; ++t) {
    const std::size_t n = 10 + rng.uniform_index(90);
    std::vector<std::uint8_t> y(n);
    std::vector<double> s(n);
    for (std::size_t i = 0; i < n; ++i) {
      y[i] = static_cast<std::uint8_t>(rng.uniform_index(2));
      s[i] = static_cast<double>(rng.uniform_index(n)) / static_cast<double>(n);
    }
    y[0] = 1;
    y[1] = 0;
    double pos = 0, neg = 0, concordant = 0;
    for (std::size_t i = 0; i < n; ++i) (y[i] ? pos : neg) += 1;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        if (y[i] && !y[j]) concordant += s[i] > s[j] ? 1.0 : (s[i] == s[j] ? 0.5 : 0.0);
      }
    }
    worst_roc = std::max(worst_roc, std::abs(roc_curve(y, s).area - concordant / (pos * neg)));

    double ks = 0.0;
    for (double th : s) {
      double fb = 0, fg = 0;
      for (std::size_t i = 0; i < n; ++i) {
        if (s[i] <= th) (y[i] ? fb : fg) += 1;
      }
      ks = std::max(ks, 100.0 * std::abs(fb / pos - fg / neg));
    }
    worst_ks = std::max(worst_ks, std::abs(ks_statistic(y, s).ks - ks));

    std::set<double, std::greater<>> thresholds(s.begin(), s.end());
    double area = 0.0, prev = 0.0;
    for (double th : thresholds) {
      double tp = 0, predicted = 0;
      for (std::size_t i = 0; i < n; ++i) {
        if (s[i] >= th) {
          ++predicted;
          tp += y[i];
        }
      }
      area += (tp / pos - prev) * (tp / predicted);
      prev = tp / pos;
    }
    worst_pr = std::max(worst_pr, std::abs(pr_curve(y, s).area - area));
  }
  check.expect(worst_roc <= 1e-12, "ROC gap " + num(worst_roc));
  check.expect(worst_ks <= 1e-9, "KS gap " + num(worst_ks));
  check.expect(worst_pr <= 1e-12, "PR gap " + num(worst_pr));
  const double ll = log_loss(std::vector<std::uint8_t>{1}, std::vector<double>{0.5});
  check.expect(std::abs(ll - std::log(2.0)) <= 1e-12, "log_loss(1, 0.5) = " + num(ll));
  return check.outcome("100 instances, max gaps ROC " + num(worst_roc) + ", KS " + num(worst_ks) +
                       ", PR " + num(worst_pr) + "; log_loss(1,0.5) = ln 2");
}

// ---- 5. Hoeffding coverage -----------------------------------------------

// X ~ U[0,1], Y = 1[X > 0.5] flipped with probability eta; classifier j
// predicts 1[X > t_j], so its true risk is eta + (1 - 2 eta) |t_j - 0.5|.
Outcome criterion_hoeffding() {
  const int n = 500, m = 20, trials = 1000;
  const double delta = 0.1, eta = 0.15;
  Rng rng(505);
  std::vector<double> thresholds(m), risk(m);
  for (int j = 0; j < m; ++j) {
    thresholds[j] = rng.uniform01();
    risk[j] = eta + (1 - 2 * eta) * std::abs(thresholds[j] - 0.5);
  }
  const double best = *std::min_element(risk.begin(), risk.end());
  const double bound = hoeffding_bound(n, m, delta);
  int held = 0;
  std::vector<double> x(n);
  std::vector<int> y(n);
  for (int t = 0; t < trials; ++t) {
    for (int i = 0; i < n; ++i) {
      x[i] = rng.uniform01();
      y[i] = (x[i] > 0.5) != (rng.uniform01() < eta);
    }
    int chosen = 0, fewest = n + 1;
    for (int j = 0; j < m; ++j) {
      int errors = 0;
      for (int i = 0; i < n; ++i) errors += (x[i] > thresholds[j]) != (y[i] == 1);
      if (errors < fewest) {
        fewest = errors;
        chosen = j;
      }
    }
    held += risk[chosen] <= best + bound;
  }
  const double coverage = static_cast<double>(held) / trials;
  Check check;
  check.expect(coverage >= 1.0 - delta, "coverage " + num(coverage));
  return check.outcome("coverage " + num(coverage) + " over " + std::to_string(trials) +
                       " trials, bound " + num(bound));
}

// ---- 6. Reweighting identity ---------------------------------------------

Outcome criterion_reweight() {
  Check check;
  Rng rng(606);
  double worst = 0.0;
  for (int t = 0; t < 200; ++t) {
    const std::size_t goods = 1 + rng.uniform_index(300), bads = 1 + rng.uniform_index(60);
    std::vector<std::uint8_t> y(goods, kGood);
    y.insert(y.end(), bads, kBad);
    ReweightSpec spec;
    const double p1 = 0.01 + 0.98 * rng.uniform01();
    spec.target_prior = {1 - p1, p1};
    spec.target_cost = {0.1 + 5 * rng.uniform01(), 0.1 + 5 * rng.uniform01()};
    std::vector<double> loss(y.size());
    for (double& l : loss) l = 3 * rng.uniform01();
    const auto w = reweight(y, spec);
    double weighted = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) weighted += w[i] * loss[i];
    weighted /= static_cast<double>(y.size());
    double sum[2] = {0, 0}, count[2] = {0, 0};
    for (std::size_t i = 0; i < y.size(); ++i) {
      sum[y[i]] += loss[i];
      count[y[i]] += 1;
    }
    double target = 0.0;
    for (int k = 0; k < 2; ++k) target += spec.target_prior[k] * spec.target_cost[k] * sum[k] / count[k];
    const double err = std::abs(weighted - target) / std::max(1.0, std::abs(target));
    worst = std::max(worst, err);
    check.expect(err <= 1e-12, "table " + std::to_string(t) + " error " + num(err));
  }
  return check.outcome("200 loss tables, max relative error " + num(worst));
}

// ---- 7. SMOTE geometry ---------------------------------------------------

double distance2(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return s;
}

Outcome criterion_smote() {
  Check check;
  Rng rng(707);
  std::size_t synthetic_total = 0;
  double worst = 0.0;
  for (int t = 0; t < 30; ++t) {
    const Dataset full =
        random_dataset(rng, 150 + rng.uniform_index(250), 1 + rng.uniform_index(4));
    // Keep roughly a quarter of the Bads so the minority needs augmenting.
    std::vector<std::size_t> keep;
    for (std::size_t r = 0; r < full.row_count(); ++r) {
      if (full.labels()[r] == kGood || r % 4 == 0) keep.push_back(r);
    }
    const Dataset d = full.subset(keep);
    SmoteConfig cfg;
    cfg.k_neighbors = 1 + static_cast<int>(rng.uniform_index(6));
    cfg.target_ratio = 0.5 + 0.5 * rng.uniform01();
    cfg.seed = static_cast<std::uint64_t>(t);
    const std::size_t bads = d.count_label(kBad), goods = d.count_label(kGood);
    const std::uint8_t minority = bads <= goods ? kBad : kGood;
    const std::size_t n_min = std::min(bads, goods), n_maj = std::max(bads, goods);
    if (n_min <= static_cast<std::size_t>(cfg.k_neighbors)) continue;
    const Dataset out = smote(d, cfg);

    const FeatureMatrix x = to_feature_matrix(out);
    std::vector<std::vector<double>> pts;
    for (std::size_t r = 0; r < d.row_count(); ++r) {
      if (d.labels()[r] == minority) pts.push_back(x.row(r));
    }
    // k nearest minority neighbours of each minority point, by brute force.
    std::vector<std::vector<std::size_t>> nn(pts.size());
    for (std::size_t a = 0; a < pts.size(); ++a) {
      std::vector<std::size_t> others;
      for (std::size_t b = 0; b < pts.size(); ++b) {
        if (b != a) others.push_back(b);
      }
      std::stable_sort(others.begin(), others.end(), [&](std::size_t p, std::size_t q) {
        return distance2(pts[a], pts[p]) < distance2(pts[a], pts[q]);
      });
      others.resize(static_cast<std::size_t>(cfg.k_neighbors));
      nn[a] = others;
    }
    for (std::size_t r = d.row_count(); r < out.row_count(); ++r) {
      ++synthetic_total;
      check.expect(out.labels()[r] == minority, "synthetic row has majority label");
      const std::vector<double> s = x.row(r);
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t a = 0; a < pts.size(); ++a) {
        for (std::size_t b : nn[a]) {
          double dot = 0.0, len = 0.0;
          for (std::size_t f = 0; f < s.size(); ++f) {
            dot += (s[f] - pts[a][f]) * (pts[b][f] - pts[a][f]);
            len += (pts[b][f] - pts[a][f]) * (pts[b][f] - pts[a][f]);
          }
          const double u = len > 0 ? std::clamp(dot / len, 0.0, 1.0) : 0.0;
          double res = 0.0;
          for (std::size_t f = 0; f < s.size(); ++f) {
            const double p = pts[a][f] + u * (pts[b][f] - pts[a][f]);
            res += (s[f] - p) * (s[f] - p);
          }
          best = std::min(best, std::sqrt(res));
        }
      }
      worst = std::max(worst, best);
      check.expect(best < 1e-9, "synthetic row off every segment, residual " + num(best));
    }
    const double target = cfg.target_ratio * static_cast<double>(n_maj);
    const double achieved = static_cast<double>(out.count_label(minority));
    check.expect(std::abs(achieved - std::max(target, static_cast<double>(n_min))) <= 1.0,
                 "minority count " + num(achieved) + " vs target " + num(target));
  }
  return check.outcome(std::to_string(synthetic_total) + " synthetic rows, max residual " +
                       num(worst) + ", ratios within one row");
}

// ---- 8. WOE --------------------------------------------------------------

Outcome criterion_woe() {
  Check check;
  check.expect(woe_value(3, 30, 1, 10, 0.0) == 0.0, "equal shares not zero");
  check.expect(woe_value(25, 100, 5, 20, 0.0) == 0.0, "equal shares not zero");
  const double w = woe_value(4, 10, 2, 10, 0.0);
  check.expect(std::abs(w - 100.0 * std::log(2.0)) <= 1e-9, "ln2 case gives " + num(w));
  check.expect(std::isfinite(woe_value(0, 10, 5, 10, 0.5)), "zero goods not finite");
  check.expect(std::isfinite(woe_value(5, 10, 0, 10, 0.5)), "zero bads not finite");
  return check.outcome("equal shares 0, ln2 case " + num(w) + ", zero cells finite");
}

// ---- 9. Synthetic challenger benchmark -----------------------------------

Outcome criterion_challenger() {
  const Dataset all = generate_credit_data(SyntheticSpec{});
  // Out-of-time holdout: the last six of 24 application months.
  auto [in_time, oot] = temporal_split(all, "month", 18);

  TrainConfig challenger;
  challenger.n_rounds = 300;
  challenger.learning_rate = 0.05;
  challenger.max_depth = 4;
  challenger.min_child_weight = 5;
  challenger.seed = 1;
  TrainConfig stump;
  stump.n_rounds = 1;
  stump.max_depth = 1;
  stump.learning_rate = 1.0;

  const auto score = [&](const TrainConfig& cfg) {
    const std::vector<double> p = predict_probas(train(in_time, cfg), oot);
    return std::make_pair(roc_curve(oot.labels(), p).area, ks_statistic(oot.labels(), p).ks);
  };
  const auto [auc_c, ks_c] = score(challenger);
  const auto [auc_s, ks_s] = score(stump);
  Check check;
  check.expect(auc_c - auc_s >= 0.03, "AUROC gain " + num(auc_c - auc_s));
  check.expect(ks_c - ks_s >= 3.0, "KS gain " + num(ks_c - ks_s));
  return check.outcome("holdout " + std::to_string(oot.row_count()) + " rows: AUROC " +
                       num(auc_c) + " vs " + num(auc_s) + ", KS " + num(ks_c) + " vs " +
                       num(ks_s));
}

// ---- 10. Determinism -----------------------------------------------------

int run_cli(const fs::path& cwd, const std::string& args) {
  const std::string cmd = "cd '" + cwd.string() + "' && '" GBSCORE_CLI_PATH "' " + args +
                          " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

Outcome criterion_determinism() {
  Check check;
  const fs::path root = testing::temp_dir("acceptance_determinism");
  const std::string config =
      "seed = 17\n"
      "[data]\n"
      "train = \"train.csv\"\n"
      "oot = \"oot.csv\"\n"
      "categorical = [\"region\"]\n"
      "exclude = [\"month\"]\n"
      "[train]\n"
      "n_rounds = 40\n"
      "max_depth = 4\n"
      "subsample = 0.8\n"
      "colsample_bytree = 0.8\n"
      "[sampling]\n"
      "mode = \"reweight\"\n"
      "target_prior = [0.7, 0.3]\n"
      "[cv]\n"
      "k = 3\n"
      "metric = \"roc_auc\"\n"
      "[cv.grid]\n"
      "learning_rate = [0.1, 0.3]\n"
      "[explain]\n"
      "background = 30\n"
      "rows = \"0-4\"\n"
      "[report]\n"
      "score_column = \"probability\"\n"
      "lower_is_riskier = false\n";
  for (const char* run : {"run1", "run2"}) {
    const fs::path dir = root / run;
    fs::create_directories(dir);
    write_file(dir / "run.toml", config);
    check.expect(run_cli(dir, "synth --out train.csv --rows 3000 --seed 5") == 0, "synth failed");
    check.expect(run_cli(dir, "synth --out oot.csv --rows 1000 --seed 6") == 0, "synth failed");
    for (const char* cmd : {"train", "evaluate", "predict", "explain", "cv"}) {
      check.expect(run_cli(dir, std::string(cmd) + " --config run.toml") == 0,
                   std::string(cmd) + " failed in " + run);
    }
    check.expect(run_cli(dir, "swapset --config run.toml --scores-a out/predictions.csv "
                              "--scores-b out/predictions.csv --labels oot.csv") == 0,
                 std::string("swapset failed in ") + run);
  }
  std::size_t files = 0;
  for (const auto& entry : fs::recursive_directory_iterator(root / "run1")) {
    if (!entry.is_regular_file()) continue;
    const fs::path rel = fs::relative(entry.path(), root / "run1");
    ++files;
    check.expect(fs::exists(root / "run2" / rel) &&
                     read_file(entry.path()) == read_file(root / "run2" / rel),
                 rel.string() + " differs");
  }
  check.expect(files > 20, "only " + std::to_string(files) + " files produced");
  return check.outcome(std::to_string(files) + " files byte-identical across two runs");
}

// ---- 11. Persistence -----------------------------------------------------

Outcome criterion_persistence() {
  Check check;
  Rng rng(1111);
  const Dataset d = random_dataset(rng, 2000, 6, 0.1);
  TrainConfig cfg;
  cfg.n_rounds = 50;
  cfg.max_depth = 5;
  cfg.subsample = 0.7;
  cfg.seed = 3;
  const BoostedModel m = train(d, cfg);
  const fs::path path = testing::temp_dir("acceptance_persistence") / "model.json";
  save_model(m, path);
  const BoostedModel back = load_model(path);
  int mismatches = 0;
  for (int i = 0; i < 1000; ++i) {
    std::vector<double> row(6);
    for (double& v : row) v = rng.uniform01() < 0.1 ? std::nan("") : rng.uniform01() * 6 - 3;
    if (predict_proba(back, row) != predict_proba(m, row)) ++mismatches;
  }
  check.expect(mismatches == 0, std::to_string(mismatches) + " of 1000 predictions differ");
  return check.outcome("1000 random rows, exact equality");
}

}  // namespace
}  // namespace gbscore

int main() {
  using namespace gbscore;
  struct Criterion {
    int id;
    const char* name;
    double budget_seconds;  // 0 = no runtime requirement
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria = {
      {1, "Shapley axioms", 60, criterion_shapley},
      {2, "booster Newton step and leaf cap", 0, criterion_newton_step},
      {3, "monotone training loss", 0, criterion_monotone_loss},
      {4, "metric oracles", 0, criterion_metrics},
      {5, "Hoeffding coverage", 120, criterion_hoeffding},
      {6, "reweighting identity", 0, criterion_reweight},
      {7, "SMOTE geometry", 0, criterion_smote},
      {8, "WOE values", 0, criterion_woe},
      {9, "synthetic challenger benchmark", 300, criterion_challenger},
      {10, "CLI determinism", 0, criterion_determinism},
      {11, "model persistence", 0, criterion_persistence},
  };
  int failed = 0;
  for (const Criterion& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (c.budget_seconds > 0 && seconds >= c.budget_seconds) {
      o.pass = false;
      o.detail += "; runtime " + num(seconds) + " s over budget";
    }
    failed += !o.pass;
    std::printf("%s criterion %d: %s: %s (%.2f s)\n", o.pass ? "PASS" : "FAIL", c.id, c.name,
                o.detail.c_str(), seconds);
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed,
              criteria.size());
  return failed == 0 ? 0 : 1;
}
