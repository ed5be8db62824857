#ifndef GBSCORE_SYNTHETIC_H_
#define GBSCORE_SYNTHETIC_H_

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "gbscore/dataset.h"

namespace gbscore {

struct SyntheticSpec {
  std::size_t rows = 50000;
  double bad_rate = 0.05;
  std::uint64_t seed = 20240501;
  double missing_rate = 0.08;  // applied to the inquiry-count feature
};

// Loan-application style table whose default log-odds mix threshold
// interactions, a product term, a periodic effect and a categorical region
// effect. Columns: utilization, dti, ltv, age, inquiries, noise (numeric
// features), region (categorical feature), month (numeric, excluded) and the
// label. The intercept is solved so the expected bad rate equals `bad_rate`.
Dataset generate_credit_data(const SyntheticSpec& spec);

// Schema matching the CSV written by dataset_to_csv(generate_credit_data(..), "bad").
std::vector<ColumnSchema> synthetic_schema();

}  // namespace gbscore

#endif  // GBSCORE_SYNTHETIC_H_
