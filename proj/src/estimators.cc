#include "influence/estimators.h"

#include <algorithm>
#include <cmath>
#include <vector>

#include "influence/error.h"
#include "influence/rng.h"

namespace influence {
namespace {

void validate(const LabeledDataset& dataset, std::size_t feature,
              const EstimatorConfig& config) {
  if (feature >= dataset.space().feature_count()) {
    throw InfluenceError(ErrorCode::kInvalidArgument, "feature out of range");
  }
  if (config.sample_count == 0) {
    throw InfluenceError(ErrorCode::kInvalidArgument, "sample count must be >= 1");
  }
  if (!(config.confidence > 0.0 && config.confidence < 1.0)) {
    throw InfluenceError(ErrorCode::kInvalidArgument,
                         "confidence must lie in (0, 1)");
  }
}

std::size_t block_count(std::uint64_t samples) {
  return static_cast<std::size_t>((samples + kSampleBlockSize - 1) /
                                  kSampleBlockSize);
}

std::uint64_t block_samples(std::uint64_t samples, std::size_t block) {
  const std::uint64_t start = std::uint64_t{block} * kSampleBlockSize;
  return std::min<std::uint64_t>(kSampleBlockSize, samples - start);
}

}  // namespace

double hoeffding_half_width(double range, std::uint64_t n, double confidence) {
  if (n == 0) return 0.0;
  return range * std::sqrt(std::log(2.0 / (1.0 - confidence)) /
                           (2.0 * static_cast<double>(n)));
}

Estimate sample_chi(const LabeledDataset& dataset, std::size_t feature,
                    const EstimatorConfig& config) {
  if (!dataset.is_binary()) {
    throw InfluenceError(ErrorCode::kNonBinary, "sample_chi needs binary values");
  }
  validate(dataset, feature, config);
  const auto& space = dataset.space();
  const std::uint64_t points = dataset.size();
  const std::uint64_t states = space.state_count(feature);

  const std::size_t blocks = block_count(config.sample_count);
  std::vector<std::uint64_t> flips(blocks, 0);
  for_each_block(blocks, [&](std::size_t block) {
    BlockRng rng(derive_seed(config.seed, feature, block));
    std::uint64_t count = 0;
    for (std::uint64_t s = block_samples(config.sample_count, block); s > 0; --s) {
      const std::size_t a = rng.below(points);
      const auto b = static_cast<StateIndex>(rng.below(states));
      const auto substitute = dataset.find(space.with_state(dataset.key(a), feature, b));
      if (substitute &&
          dataset.binary_value(*substitute) != dataset.binary_value(a)) {
        ++count;
      }
    }
    flips[block] = count;
  });

  std::uint64_t total = 0;
  for (std::uint64_t f : flips) total += f;
  const double scale = static_cast<double>(points) * static_cast<double>(states);
  Estimate e;
  e.samples_used = config.sample_count;
  e.value = scale * static_cast<double>(total) /
            static_cast<double>(config.sample_count);
  e.half_width =
      hoeffding_half_width(scale, config.sample_count, config.confidence);
  return e;
}

Estimate sample_chi_distance(const LabeledDataset& dataset,
                             const PseudoDistance& distance, std::size_t feature,
                             const EstimatorConfig& config) {
  distance.check_compatible(dataset.kind());
  validate(dataset, feature, config);
  const auto& space = dataset.space();
  const std::uint64_t points = dataset.size();
  const std::uint64_t states = space.state_count(feature);

  const std::size_t blocks = block_count(config.sample_count);
  std::vector<double> sums(blocks, 0.0);
  std::vector<double> maxima(blocks, 0.0);
  for_each_block(blocks, [&](std::size_t block) {
    BlockRng rng(derive_seed(config.seed, feature, block));
    KahanSum sum;
    double max_seen = 0.0;
    for (std::uint64_t s = block_samples(config.sample_count, block); s > 0; --s) {
      const std::size_t a = rng.below(points);
      const auto b = static_cast<StateIndex>(rng.below(states));
      const auto substitute = dataset.find(space.with_state(dataset.key(a), feature, b));
      if (!substitute || *substitute == a) continue;
      const double d = distance(dataset.value(*substitute), dataset.value(a));
      sum.add(d);
      max_seen = std::max(max_seen, d);
    }
    sums[block] = sum.value();
    maxima[block] = max_seen;
  });

  KahanSum total;
  double range = 0.0;
  for (std::size_t b = 0; b < blocks; ++b) {
    total.add(sums[b]);
    range = std::max(range, maxima[b]);
  }
  const double scale = static_cast<double>(points) * static_cast<double>(states);
  Estimate e;
  e.samples_used = config.sample_count;
  e.value = scale * total.value() / static_cast<double>(config.sample_count);
  e.half_width =
      hoeffding_half_width(scale * range, config.sample_count, config.confidence);
  return e;
}

}  // namespace influence
