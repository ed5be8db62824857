#ifndef GBSCORE_EXPLAIN_H_
#define GBSCORE_EXPLAIN_H_

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "gbscore/booster.h"

namespace gbscore {

// Any function of a numeric row; for boosted models, the margin.
using Scorer = std::function<double(std::span<const double>)>;

Scorer margin_scorer(const BoostedModel& model);

inline constexpr std::size_t kMaxExactFeatures = 16;

// Bit i set = feature i present.
struct CoalitionMask {
  std::uint32_t bits = 0;
  std::size_t size = 0;

  bool present(std::size_t i) const { return (bits >> i) & 1u; }
  std::size_t count() const;
  static CoalitionMask full(std::size_t m) {
    return {m == 32 ? ~0u : (1u << m) - 1u, m};
  }
};

struct BackgroundSet {
  std::vector<std::vector<double>> rows;
  std::uint64_t seed = 0;
};

// Up to `size` distinct rows of `x` drawn with `seed`, kept in row order.
BackgroundSet make_background(const FeatureMatrix& x, std::size_t size,
                              std::uint64_t seed);

// Mean over background rows b of score(x where present, b elsewhere).
// Errors: EmptyBackground, InvalidArgument on row/mask length mismatch.
double coalition_value(const Scorer& scorer, std::span<const double> x,
                       const CoalitionMask& mask, const BackgroundSet& bg);

struct Attribution {
  double phi0 = 0.0;
  std::vector<double> phi;
  std::vector<std::string> feature_names;
  std::vector<double> feature_values;
  double output = 0.0;  // scorer(x)
};

// Full subset enumeration with weights |S|!(M-|S|-1)!/M!.
// Errors: TooManyFeatures (M > 16), EmptyBackground.
Attribution shapley_exact(const Scorer& scorer, std::span<const double> x,
                          const BackgroundSet& bg,
                          const std::vector<std::string>& feature_names = {});

struct AxiomReport {
  bool local_accuracy = false;
  double residual = 0.0;
  bool missingness = false;
  // Features identical in x and every background row.
  std::vector<std::size_t> inert_features;
};

AxiomReport verify_axioms(const Scorer& scorer, std::span<const double> x,
                          const BackgroundSet& bg, const Attribution& attribution,
                          double tolerance = 1e-9);

struct FeatureSummary {
  std::size_t feature = 0;
  std::string name;
  double mean_abs_phi = 0.0;
  // (phi, feature value) per explained row, in input order.
  std::vector<std::pair<double, double>> points;
};

// Sorted by mean |phi| descending; ties keep feature order.
std::vector<FeatureSummary> summary_data(const std::vector<Attribution>& attributions);

struct DependenceRow {
  double value = 0.0;
  double phi = 0.0;
  double color_value = 0.0;
};

// Errors: UnknownFeature.
std::vector<DependenceRow> dependence_data(const std::vector<Attribution>& attributions,
                                           const std::string& feature,
                                           const std::string& color_feature);

struct ForcePush {
  std::string feature;
  double phi = 0.0;
  int direction = 0;  // sign of phi
};

struct ForceData {
  double base_value = 0.0;
  double output_value = 0.0;  // base + sum of pushes
  std::vector<ForcePush> pushes;
};

// Non-zero attributions sorted by |phi| descending.
ForceData force_data(const Attribution& attribution);

std::string attributions_to_csv(const std::vector<Attribution>& attributions,
                                const std::vector<std::size_t>& row_ids);
std::string summary_to_csv(const std::vector<FeatureSummary>& summary);
std::string dependence_to_csv(const std::vector<DependenceRow>& rows,
                              const std::string& feature,
                              const std::string& color_feature);
std::string force_to_csv(const ForceData& force);

}  // namespace gbscore

#endif  // GBSCORE_EXPLAIN_H_
