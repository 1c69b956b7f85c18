#ifndef INFLUENCE_LINEAR_H_
#define INFLUENCE_LINEAR_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "influence/estimators.h"

namespace influence {

// v(x) = 1 iff x . w >= q, over [0,1]^n.
class LinearClassifier {
 public:
  // Throws kInvalidArgument for an empty or zero-containing weight vector.
  LinearClassifier(std::vector<double> weights, double threshold);

  std::size_t dimension() const { return weights_.size(); }
  const std::vector<double>& weights() const { return weights_; }
  double threshold() const { return threshold_; }

  // Throws kDimensionMismatch.
  int classify(std::span<const double> x) const;

 private:
  std::vector<double> weights_;
  double threshold_;
};

// All continuous influences below use the measure of [0,1]^{n+1}: chi_i is
// the integral over (x, b) of |v(x_-i, b) - v(x)|, so closed forms, Monte
// Carlo and grid values are directly comparable.

// Volumes of the pivotal set (substituting b turns a loss into a win) and
// the anti-pivotal set (a win into a loss). chi_i is their sum.
struct PivotalAccount {
  double piv_volume = 0;
  double anti_piv_volume = 0;
  double piv_half_width = 0;
  double anti_piv_half_width = 0;
};

struct LinearEstimate {
  Estimate chi;
  PivotalAccount pivotal;
};

LinearEstimate chi_linear_mc(const LinearClassifier& clf, std::size_t feature,
                             std::uint64_t sample_count, std::uint64_t seed,
                             double confidence = 0.95);

// Single feature, w > 0: 2 (1 - q/w)(q/w) for 0 < q < w, else 0.
double chi_linear_1d_closed(double w, double q);

struct TwoFeatureClosedForm {
  double chi1 = 0;
  double chi2 = 0;
  // Pivotal volumes, i.e. half of each chi.
  double piv1 = 0;
  double piv2 = 0;
};

// Exact values for w1 > 0 > w2; other sign patterns throw
// kUnsupportedSignPattern.
TwoFeatureClosedForm chi_linear_2d_closed(double w1, double w2, double q);

// chi on the m-per-axis cell-centre grid, divided by m^{n+1}.
double chi_linear_grid(const LinearClassifier& clf, std::size_t feature,
                       std::size_t resolution);

enum class MonotonicityMethod { kMonteCarlo, kGrid };

struct MonotonicityOptions {
  MonotonicityMethod method = MonotonicityMethod::kMonteCarlo;
  std::uint64_t sample_count = 200000;
  std::uint64_t seed = 0;
  double confidence = 0.95;
  std::size_t resolution = 40;
  // A gap counts only when larger than max(tolerance,
  // noise_multiplier * (half_width_i + half_width_j)).
  double tolerance = 1e-9;
  double noise_multiplier = 4.0;
};

enum class PairVerdict { kConfirmed, kViolation, kInconclusive };

struct PairCheck {
  std::size_t i = 0;
  std::size_t j = 0;
  double gap = 0;     // chi_i - chi_j
  double margin = 0;
  PairVerdict verdict = PairVerdict::kInconclusive;
};

struct MonotonicityReport {
  std::vector<Estimate> chi;  // per feature; half_width 0 for grid
  std::vector<PairCheck> pairs;
  std::size_t violations() const;
  std::size_t confirmed() const;
};

// Checks that the chi ranking follows the |w| ranking for every feature pair:
// for |w_i| > |w_j| a confirmed gap must favour i; for |w_i| = |w_j| the
// values must agree within the margin.
MonotonicityReport check_weight_monotonicity(const LinearClassifier& clf,
                                             const MonotonicityOptions& options);

}  // namespace influence

#endif  // INFLUENCE_LINEAR_H_
