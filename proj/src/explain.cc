#include "gbscore/explain.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <sstream>

#include "gbscore/csv.h"
#include "gbscore/error.h"
#include "gbscore/random.h"

namespace gbscore {

Scorer margin_scorer(const BoostedModel& model) {
  return [&model](std::span<const double> row) { return predict_margin(model, row); };
}

std::size_t CoalitionMask::count() const {
  return static_cast<std::size_t>(std::popcount(bits));
}

BackgroundSet make_background(const FeatureMatrix& x, std::size_t size,
                              std::uint64_t seed) {
  BackgroundSet bg;
  bg.seed = seed;
  Rng rng(seed);
  for (std::size_t r : rng.sample_without_replacement(x.rows(), size)) {
    bg.rows.push_back(x.row(r));
  }
  return bg;
}

double coalition_value(const Scorer& scorer, std::span<const double> x,
                       const CoalitionMask& mask, const BackgroundSet& bg) {
  if (bg.rows.empty()) throw Error(ErrorCode::kEmptyBackground, "no background rows");
  if (mask.size != x.size()) {
    throw Error(ErrorCode::kInvalidArgument, "mask length differs from row length");
  }
  // Every composite row equals x when all features are present.
  if (mask.bits == CoalitionMask::full(mask.size).bits) return scorer(x);

  std::vector<double> composite(x.size());
  double total = 0.0;
  double first = 0.0;
  bool all_equal = true;
  for (std::size_t k = 0; k < bg.rows.size(); ++k) {
    const std::vector<double>& b = bg.rows[k];
    if (b.size() != x.size()) {
      throw Error(ErrorCode::kInvalidArgument, "background row length differs");
    }
    for (std::size_t i = 0; i < x.size(); ++i) {
      composite[i] = mask.present(i) ? x[i] : b[i];
    }
    const double score = scorer(composite);
    if (k == 0) first = score;
    all_equal = all_equal && score == first;
    total += score;
  }
  // The mean of identical values is returned exactly, so coalitions that
  // differ only in features no background row can change agree bit-for-bit.
  return all_equal ? first : total / static_cast<double>(bg.rows.size());
}

Attribution shapley_exact(const Scorer& scorer, std::span<const double> x,
                          const BackgroundSet& bg,
                          const std::vector<std::string>& feature_names) {
  const std::size_t m = x.size();
  if (m > kMaxExactFeatures) {
    throw Error(ErrorCode::kTooManyFeatures,
                std::to_string(m) + " features; exact enumeration supports at most " +
                    std::to_string(kMaxExactFeatures));
  }
  if (bg.rows.empty()) throw Error(ErrorCode::kEmptyBackground, "no background rows");

  const std::uint32_t n_masks = 1u << m;
  std::vector<double> value(n_masks);
  for (std::uint32_t bits = 0; bits < n_masks; ++bits) {
    value[bits] = coalition_value(scorer, x, CoalitionMask{bits, m}, bg);
  }

  // weight[s] = s! (m - s - 1)! / m!
  std::vector<double> weight(m);
  for (std::size_t s = 0; s < m; ++s) {
    weight[s] = std::exp(std::lgamma(static_cast<double>(s) + 1.0) +
                         std::lgamma(static_cast<double>(m - s)) -
                         std::lgamma(static_cast<double>(m) + 1.0));
  }

  Attribution out;
  out.phi.assign(m, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    const std::uint32_t bit = 1u << i;
    double phi = 0.0;
    for (std::uint32_t bits = 0; bits < n_masks; ++bits) {
      if (bits & bit) continue;
      phi += weight[static_cast<std::size_t>(std::popcount(bits))] *
             (value[bits | bit] - value[bits]);
    }
    out.phi[i] = phi;
  }
  out.phi0 = value[0];
  out.output = value[n_masks - 1];
  out.feature_values.assign(x.begin(), x.end());
  out.feature_names = feature_names;
  if (out.feature_names.empty()) {
    for (std::size_t i = 0; i < m; ++i) out.feature_names.push_back("f" + std::to_string(i));
  }
  return out;
}

AxiomReport verify_axioms(const Scorer& scorer, std::span<const double> x,
                          const BackgroundSet& bg, const Attribution& attribution,
                          double tolerance) {
  AxiomReport report;
  double reconstructed = attribution.phi0;
  for (double p : attribution.phi) reconstructed += p;
  report.residual = std::abs(scorer(x) - reconstructed);
  report.local_accuracy = report.residual < tolerance;

  auto same = [](double a, double b) {
    return a == b || (std::isnan(a) && std::isnan(b));
  };
  report.missingness = true;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const bool inert = std::all_of(bg.rows.begin(), bg.rows.end(),
                                   [&](const std::vector<double>& b) { return same(b[i], x[i]); });
    if (!inert) continue;
    report.inert_features.push_back(i);
    if (!(std::abs(attribution.phi.at(i)) <= tolerance)) report.missingness = false;
  }
  return report;
}

std::vector<FeatureSummary> summary_data(const std::vector<Attribution>& attributions) {
  if (attributions.empty()) return {};
  const std::size_t m = attributions.front().phi.size();
  std::vector<FeatureSummary> out(m);
  for (std::size_t i = 0; i < m; ++i) {
    out[i].feature = i;
    out[i].name = attributions.front().feature_names.at(i);
    double total = 0.0;
    for (const Attribution& a : attributions) {
      total += std::abs(a.phi.at(i));
      out[i].points.emplace_back(a.phi[i], a.feature_values.at(i));
    }
    out[i].mean_abs_phi = total / static_cast<double>(attributions.size());
  }
  std::stable_sort(out.begin(), out.end(), [](const FeatureSummary& a, const FeatureSummary& b) {
    return a.mean_abs_phi > b.mean_abs_phi;
  });
  return out;
}

std::vector<DependenceRow> dependence_data(const std::vector<Attribution>& attributions,
                                           const std::string& feature,
                                           const std::string& color_feature) {
  if (attributions.empty()) return {};
  const auto& names = attributions.front().feature_names;
  auto index_of = [&](const std::string& name) {
    auto it = std::find(names.begin(), names.end(), name);
    if (it == names.end()) {
      throw Error(ErrorCode::kUnknownFeature, "no explained feature '" + name + "'");
    }
    return static_cast<std::size_t>(it - names.begin());
  };
  const std::size_t f = index_of(feature);
  const std::size_t c = index_of(color_feature);
  std::vector<DependenceRow> rows;
  rows.reserve(attributions.size());
  for (const Attribution& a : attributions) {
    rows.push_back({a.feature_values.at(f), a.phi.at(f), a.feature_values.at(c)});
  }
  return rows;
}

ForceData force_data(const Attribution& attribution) {
  ForceData out;
  out.base_value = attribution.phi0;
  out.output_value = attribution.phi0;
  for (std::size_t i = 0; i < attribution.phi.size(); ++i) {
    const double phi = attribution.phi[i];
    out.output_value += phi;
    if (phi == 0.0) continue;
    out.pushes.push_back({attribution.feature_names.at(i), phi, phi > 0.0 ? 1 : -1});
  }
  std::stable_sort(out.pushes.begin(), out.pushes.end(),
                   [](const ForcePush& a, const ForcePush& b) {
                     return std::abs(a.phi) > std::abs(b.phi);
                   });
  return out;
}

std::string attributions_to_csv(const std::vector<Attribution>& attributions,
                                const std::vector<std::size_t>& row_ids) {
  std::ostringstream out;
  std::vector<std::string> header = {"row_id", "base_value"};
  if (!attributions.empty()) {
    for (const std::string& name : attributions.front().feature_names) {
      header.push_back("phi_" + name);
    }
  }
  header.push_back("output");
  write_csv_row(out, header);
  for (std::size_t k = 0; k < attributions.size(); ++k) {
    const Attribution& a = attributions[k];
    std::vector<std::string> fields = {std::to_string(row_ids.at(k)), format_real(a.phi0)};
    for (double p : a.phi) fields.push_back(format_real(p));
    fields.push_back(format_real(a.output));
    write_csv_row(out, fields);
  }
  return out.str();
}

std::string summary_to_csv(const std::vector<FeatureSummary>& summary) {
  std::ostringstream out;
  write_csv_row(out, {"rank", "feature", "mean_abs_phi"});
  for (std::size_t i = 0; i < summary.size(); ++i) {
    write_csv_row(out, {std::to_string(i + 1), summary[i].name,
                        format_real(summary[i].mean_abs_phi)});
  }
  return out.str();
}

std::string dependence_to_csv(const std::vector<DependenceRow>& rows,
                              const std::string& feature,
                              const std::string& color_feature) {
  std::ostringstream out;
  write_csv_row(out, {feature, "phi_" + feature, color_feature});
  for (const DependenceRow& r : rows) {
    write_csv_row(out, {format_real(r.value), format_real(r.phi), format_real(r.color_value)});
  }
  return out.str();
}

std::string force_to_csv(const ForceData& force) {
  std::ostringstream out;
  write_csv_row(out, {"feature", "phi", "direction"});
  for (const ForcePush& p : force.pushes) {
    write_csv_row(out, {p.feature, format_real(p.phi), std::to_string(p.direction)});
  }
  return out.str();
}

}  // namespace gbscore
