#include "influence/linear.h"

#include <cmath>
#include <string>

#include "influence/error.h"
#include "influence/measures.h"
#include "influence/rng.h"

namespace influence {

LinearClassifier::LinearClassifier(std::vector<double> weights, double threshold)
    : weights_(std::move(weights)), threshold_(threshold) {
  if (weights_.empty()) {
    throw InfluenceError(ErrorCode::kInvalidArgument, "no weights given");
  }
  for (double w : weights_) {
    if (w == 0.0 || !std::isfinite(w)) {
      throw InfluenceError(ErrorCode::kInvalidArgument,
                           "weights must be finite and nonzero");
    }
  }
  if (!std::isfinite(threshold_)) {
    throw InfluenceError(ErrorCode::kInvalidArgument, "threshold must be finite");
  }
}

int LinearClassifier::classify(std::span<const double> x) const {
  if (x.size() != weights_.size()) {
    throw InfluenceError(ErrorCode::kDimensionMismatch,
                         "point has dimension " + std::to_string(x.size()) +
                             ", classifier expects " +
                             std::to_string(weights_.size()));
  }
  double dot = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) dot += x[k] * weights_[k];
  return dot >= threshold_ ? 1 : 0;
}

LinearEstimate chi_linear_mc(const LinearClassifier& clf, std::size_t feature,
                             std::uint64_t sample_count, std::uint64_t seed,
                             double confidence) {
  const std::size_t n = clf.dimension();
  if (feature >= n) {
    throw InfluenceError(ErrorCode::kInvalidArgument, "feature out of range");
  }
  if (sample_count == 0) {
    throw InfluenceError(ErrorCode::kInvalidArgument, "sample count must be >= 1");
  }
  if (!(confidence > 0.0 && confidence < 1.0)) {
    throw InfluenceError(ErrorCode::kInvalidArgument,
                         "confidence must lie in (0, 1)");
  }
  const auto& w = clf.weights();
  const double q = clf.threshold();

  const std::size_t blocks =
      static_cast<std::size_t>((sample_count + kSampleBlockSize - 1) / kSampleBlockSize);
  std::vector<std::uint64_t> piv(blocks, 0), anti(blocks, 0);
  for_each_block(blocks, [&](std::size_t block) {
    BlockRng rng(derive_seed(seed, feature, block));
    const std::uint64_t start = std::uint64_t{block} * kSampleBlockSize;
    const std::uint64_t count =
        std::min<std::uint64_t>(kSampleBlockSize, sample_count - start);
    std::uint64_t p = 0, a = 0;
    for (std::uint64_t s = 0; s < count; ++s) {
      double dot = 0.0;
      double own = 0.0;
      for (std::size_t k = 0; k < n; ++k) {
        const double x = rng.uniform01();
        dot += x * w[k];
        if (k == feature) own = x;
      }
      const double b = rng.uniform01();
      const double substituted = dot - own * w[feature] + b * w[feature];
      const bool before = dot >= q;
      const bool after = substituted >= q;
      if (!before && after) ++p;
      if (before && !after) ++a;
    }
    piv[block] = p;
    anti[block] = a;
  });

  std::uint64_t piv_total = 0, anti_total = 0;
  for (std::size_t b = 0; b < blocks; ++b) {
    piv_total += piv[b];
    anti_total += anti[b];
  }
  const double n_samples = static_cast<double>(sample_count);
  LinearEstimate out;
  out.pivotal.piv_volume = static_cast<double>(piv_total) / n_samples;
  out.pivotal.anti_piv_volume = static_cast<double>(anti_total) / n_samples;
  const double hw = hoeffding_half_width(1.0, sample_count, confidence);
  out.pivotal.piv_half_width = hw;
  out.pivotal.anti_piv_half_width = hw;
  out.chi.value = static_cast<double>(piv_total + anti_total) / n_samples;
  out.chi.half_width = hw;
  out.chi.samples_used = sample_count;
  return out;
}

double chi_linear_1d_closed(double w, double q) {
  if (!(w > 0.0)) {
    throw InfluenceError(ErrorCode::kUnsupportedSignPattern,
                         "single-feature closed form needs w > 0");
  }
  if (q <= 0.0 || q >= w) return 0.0;
  const double r = q / w;
  return 2.0 * (1.0 - r) * r;
}

TwoFeatureClosedForm chi_linear_2d_closed(double w1, double w2, double q) {
  if (!(w1 > 0.0 && w2 < 0.0)) {
    throw InfluenceError(ErrorCode::kUnsupportedSignPattern,
                         "two-feature closed form needs w1 > 0 > w2");
  }
  TwoFeatureClosedForm out;
  if (q >= 0.0) {
    if (w1 < q) return out;  // never winning
    if (q >= w1 + w2) {
      out.piv1 = (w1 - q) * (w1 - q) * (2 * q + w1) / (6 * (-w2) * w1 * w1);
      out.piv2 = (w1 - q) * (w1 - q) * (2 * q - 2 * w1 - 3 * w2) /
                 (6 * w2 * w2 * w1);
    } else {
      out.piv1 = (6 * q * (w1 + w2) - 6 * q * q - w2 * (3 * w1 + 2 * w2)) /
                 (6 * w1 * w1);
      out.piv2 = -w2 / (6 * w1);
    }
  } else {
    if (w2 >= q) return out;  // always winning
    if (q >= w1 + w2) {
      out.piv1 = w1 / (-6 * w2);
      out.piv2 = -(6 * q * q - 6 * q * (w1 + w2) + w1 * (3 * w2 + 2 * w1)) /
                 (6 * w2 * w2);
    } else {
      out.piv1 = (q - w2) * (q - w2) * (2 * q - 2 * w2 - 3 * w1) /
                 (6 * w2 * w1 * w1);
      out.piv2 = -(q - w2) * (q - w2) * (2 * q + w2) / (6 * w2 * w2 * w1);
    }
  }
  out.chi1 = 2 * out.piv1;
  out.chi2 = 2 * out.piv2;
  return out;
}

double chi_linear_grid(const LinearClassifier& clf, std::size_t feature,
                       std::size_t resolution) {
  const std::size_t n = clf.dimension();
  if (feature >= n) {
    throw InfluenceError(ErrorCode::kInvalidArgument, "feature out of range");
  }
  if (resolution < 2) {
    throw InfluenceError(ErrorCode::kInvalidArgument, "grid resolution must be >= 2");
  }
  double cells = 1.0;
  for (std::size_t k = 0; k < n; ++k) cells *= static_cast<double>(resolution);
  if (cells > static_cast<double>(enumeration_cap())) {
    throw InfluenceError(ErrorCode::kCapExceeded,
                         "grid of " + std::to_string(cells) +
                             " cells exceeds the enumeration cap");
  }
  std::vector<std::string> labels(resolution);
  for (std::size_t s = 0; s < resolution; ++s) labels[s] = std::to_string(s);
  std::vector<Feature> features(n);
  for (std::size_t k = 0; k < n; ++k) features[k] = {"x" + std::to_string(k + 1), labels};

  const double step = 1.0 / static_cast<double>(resolution);
  std::vector<double> point(n);
  const LabeledDataset grid =
      build_full_dataset(build_space(std::move(features)), [&](const Profile& p) {
        for (std::size_t k = 0; k < n; ++k) point[k] = (p[k] + 0.5) * step;
        return Value::binary(clf.classify(point) == 1);
      });
  return static_cast<double>(chi_win_loss_form(grid, feature)) /
         (cells * static_cast<double>(resolution));
}

std::size_t MonotonicityReport::violations() const {
  std::size_t k = 0;
  for (const auto& p : pairs) k += p.verdict == PairVerdict::kViolation;
  return k;
}

std::size_t MonotonicityReport::confirmed() const {
  std::size_t k = 0;
  for (const auto& p : pairs) k += p.verdict == PairVerdict::kConfirmed;
  return k;
}

MonotonicityReport check_weight_monotonicity(const LinearClassifier& clf,
                                             const MonotonicityOptions& options) {
  const std::size_t n = clf.dimension();
  MonotonicityReport report;
  for (std::size_t i = 0; i < n; ++i) {
    if (options.method == MonotonicityMethod::kMonteCarlo) {
      report.chi.push_back(chi_linear_mc(clf, i, options.sample_count,
                                         options.seed, options.confidence)
                               .chi);
    } else {
      Estimate e;
      e.value = chi_linear_grid(clf, i, options.resolution);
      report.chi.push_back(e);
    }
  }
  const auto& w = clf.weights();
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a + 1; b < n; ++b) {
      // Order each pair so that |w_i| >= |w_j|.
      const bool swap = std::abs(w[b]) > std::abs(w[a]);
      PairCheck pc;
      pc.i = swap ? b : a;
      pc.j = swap ? a : b;
      pc.gap = report.chi[pc.i].value - report.chi[pc.j].value;
      pc.margin = std::max(options.tolerance,
                           options.noise_multiplier * (report.chi[pc.i].half_width +
                                                       report.chi[pc.j].half_width));
      if (std::abs(w[pc.i]) == std::abs(w[pc.j])) {
        pc.verdict = std::abs(pc.gap) <= pc.margin ? PairVerdict::kConfirmed
                                                    : PairVerdict::kViolation;
      } else if (pc.gap > pc.margin) {
        pc.verdict = PairVerdict::kConfirmed;
      } else if (pc.gap < -pc.margin) {
        pc.verdict = PairVerdict::kViolation;
      } else {
        pc.verdict = PairVerdict::kInconclusive;
      }
      report.pairs.push_back(pc);
    }
  }
  return report;
}

}  // namespace influence
