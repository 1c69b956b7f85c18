#ifndef INFLUENCE_ESTIMATORS_H_
#define INFLUENCE_ESTIMATORS_H_

#include <cstddef>
#include <cstdint>

#include "influence/core.h"
#include "influence/measures.h"

namespace influence {

struct EstimatorConfig {
  std::uint64_t sample_count = 100000;
  std::uint64_t seed = 0;
  double confidence = 0.95;
};

struct Estimate {
  double value = 0;
  double half_width = 0;
  std::uint64_t samples_used = 0;
};

// Two-sided Hoeffding half width for the mean of n samples with the given
// range.
double hoeffding_half_width(double range, std::uint64_t n, double confidence);

// Unbiased estimate of chi: (a, b) drawn uniformly from B x A_i, unobserved
// substitutes contribute 0, scaled by |B| |A_i|.
Estimate sample_chi(const LabeledDataset& dataset, std::size_t feature,
                    const EstimatorConfig& config);

// Same design for chi_distance. The bound's per-sample range is the largest
// distance seen while sampling, which is only a heuristic for unbounded
// distances.
Estimate sample_chi_distance(const LabeledDataset& dataset,
                             const PseudoDistance& distance,
                             std::size_t feature, const EstimatorConfig& config);

}  // namespace influence

#endif  // INFLUENCE_ESTIMATORS_H_
