#include "gbscore/synthetic.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "gbscore/booster.h"
#include "gbscore/random.h"

namespace gbscore {

namespace {

double standard_normal(Rng& rng) {
  // Box-Muller; 1 - u keeps the logarithm finite.
  const double u1 = 1.0 - rng.uniform01();
  const double u2 = rng.uniform01();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

constexpr const char* kRegions[] = {"north", "south", "east", "west",
                                    "central", "coastal", "mountain", "islands"};
constexpr double kRegionEffect[] = {-0.4, 0.3, 0.0, -0.2, 0.1, 0.6, -0.6, 0.9};
constexpr double kRegionShare[] = {0.2, 0.18, 0.15, 0.14, 0.12, 0.1, 0.07, 0.04};

}  // namespace

std::vector<ColumnSchema> synthetic_schema() {
  return {{"utilization", ColumnKind::kNumeric, ColumnRole::kFeature},
          {"dti", ColumnKind::kNumeric, ColumnRole::kFeature},
          {"ltv", ColumnKind::kNumeric, ColumnRole::kFeature},
          {"age", ColumnKind::kNumeric, ColumnRole::kFeature},
          {"inquiries", ColumnKind::kNumeric, ColumnRole::kFeature},
          {"noise", ColumnKind::kNumeric, ColumnRole::kFeature},
          {"region", ColumnKind::kCategorical, ColumnRole::kFeature},
          {"month", ColumnKind::kNumeric, ColumnRole::kExclude},
          {"bad", ColumnKind::kNumeric, ColumnRole::kLabel}};
}

Dataset generate_credit_data(const SyntheticSpec& spec) {
  const std::size_t n = spec.rows;
  Rng rng(spec.seed);

  std::vector<double> utilization(n), dti(n), ltv(n), age(n), inquiries(n), noise(n),
      month(n), risk(n);
  std::vector<std::int32_t> region(n);
  for (std::size_t i = 0; i < n; ++i) {
    utilization[i] = std::clamp(0.45 + 0.25 * standard_normal(rng), 0.0, 1.2);
    dti[i] = std::max(0.0, 0.3 + 0.12 * standard_normal(rng));
    ltv[i] = 0.5 + 0.8 * rng.uniform01();
    age[i] = std::round(std::clamp(42.0 + 12.0 * standard_normal(rng), 18.0, 85.0));
    inquiries[i] = std::floor(-std::log(1.0 - rng.uniform01()) * 1.5);
    noise[i] = standard_normal(rng);
    month[i] = static_cast<double>(1 + rng.uniform_index(24));
    const double u = rng.uniform01();
    double acc = 0.0;
    region[i] = 7;
    for (int k = 0; k < 8; ++k) {
      acc += kRegionShare[k];
      if (u < acc) {
        region[i] = k;
        break;
      }
    }

    // Log-odds without intercept. Threshold interactions and curvature are
    // what a single split cannot capture.
    const double high_util_high_dti = (utilization[i] > 0.7 && dti[i] > 0.35) ? 1.8 : 0.0;
    const double young_high_ltv = (age[i] < 30.0 && ltv[i] > 1.0) ? 1.2 : 0.0;
    risk[i] = high_util_high_dti + young_high_ltv +
              3.0 * (utilization[i] - 0.45) * (dti[i] - 0.3) * 4.0 +
              0.8 * std::sin(6.0 * ltv[i]) + 0.35 * std::min(inquiries[i], 6.0) +
              0.015 * std::abs(age[i] - 45.0) + kRegionEffect[region[i]];
  }

  // Solve the intercept so the mean default probability hits bad_rate.
  double lo = -20.0, hi = 20.0;
  for (int iter = 0; iter < 100; ++iter) {
    const double mid = 0.5 * (lo + hi);
    double mean = 0.0;
    for (std::size_t i = 0; i < n; ++i) mean += sigmoid(mid + risk[i]);
    mean /= static_cast<double>(n);
    (mean < spec.bad_rate ? lo : hi) = mid;
  }
  const double intercept = 0.5 * (lo + hi);

  std::vector<std::uint8_t> labels(n);
  for (std::size_t i = 0; i < n; ++i) {
    labels[i] = rng.uniform01() < sigmoid(intercept + risk[i]) ? kBad : kGood;
    if (rng.uniform01() < spec.missing_rate) {
      inquiries[i] = std::numeric_limits<double>::quiet_NaN();
    }
  }

  auto numeric = [](std::string name, std::vector<double> v,
                    ColumnRole role = ColumnRole::kFeature) {
    Column c;
    c.name = std::move(name);
    c.kind = ColumnKind::kNumeric;
    c.role = role;
    c.numeric = std::move(v);
    return c;
  };
  std::vector<Column> columns;
  columns.push_back(numeric("utilization", std::move(utilization)));
  columns.push_back(numeric("dti", std::move(dti)));
  columns.push_back(numeric("ltv", std::move(ltv)));
  columns.push_back(numeric("age", std::move(age)));
  columns.push_back(numeric("inquiries", std::move(inquiries)));
  columns.push_back(numeric("noise", std::move(noise)));
  Column region_col;
  region_col.name = "region";
  region_col.kind = ColumnKind::kCategorical;
  region_col.role = ColumnRole::kFeature;
  region_col.categories.assign(std::begin(kRegions), std::end(kRegions));
  region_col.codes = std::move(region);
  columns.push_back(std::move(region_col));
  columns.push_back(numeric("month", std::move(month), ColumnRole::kExclude));
  return Dataset(std::move(columns), std::move(labels));
}

}  // namespace gbscore
