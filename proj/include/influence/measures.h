#ifndef INFLUENCE_MEASURES_H_
#define INFLUENCE_MEASURES_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "influence/core.h"

namespace influence {

// Nonnegative weight per profile. Lookups of profiles without a weight throw
// kMissingWeight.
class WeightFunction {
 public:
  WeightFunction() = default;

  // Throws kNegativeWeight for negative or non-finite weights.
  void set(ProfileKey key, double weight);
  double at(ProfileKey key) const;
  bool contains(ProfileKey key) const { return weights_.contains(key); }
  std::size_t size() const { return weights_.size(); }

  static WeightFunction uniform(const LabeledDataset& dataset, double weight);
  // weights[p] belongs to dataset point p.
  static WeightFunction from_points(const LabeledDataset& dataset,
                                    std::span<const double> weights);
  WeightFunction scaled(double alpha) const;

 private:
  std::unordered_map<ProfileKey, double> weights_;
};

// How w(b | a_-i) is read off the weight function.
enum class ConditionalWeighting {
  // w(b | a_-i) = w(a_-i, b); the matching product form uses w(a_-i) = 1.
  kPoint,
  // w(b | a_-i) = w(a_-i, b) / w(a_-i) with w(a_-i) = sum_b w(a_-i, b).
  kConditional,
};

class PseudoDistance {
 public:
  enum class Kind { kDiscrete, kAbsolute, kCosine, kTable };

  static PseudoDistance discrete() { return PseudoDistance(Kind::kDiscrete); }
  static PseudoDistance absolute() { return PseudoDistance(Kind::kAbsolute); }
  static PseudoDistance cosine() { return PseudoDistance(Kind::kCosine); }
  // Distance between categorical scalar outcomes 0..k-1, given as a k x k
  // row-major matrix. Symmetry, zero diagonal and nonnegativity are checked
  // exhaustively; the triangle inequality exhaustively for k <= 64 and on
  // 100000 seeded random triples above that.
  static PseudoDistance table(std::size_t k, std::vector<double> matrix);

  Kind kind() const { return kind_; }
  std::string name() const;

  // Throws kIncompatibleDistance if this distance cannot compare values of
  // the given kind.
  void check_compatible(ValueKind kind) const;
  double operator()(std::span<const double> x, std::span<const double> y) const;

 private:
  explicit PseudoDistance(Kind kind) : kind_(kind) {}

  Kind kind_;
  std::size_t table_size_ = 0;
  std::vector<double> table_;
};

// 1 - cos(x, y). Throws kZeroVector and kDimensionMismatch.
double cosine_distance(std::span<const double> x, std::span<const double> y);

// Number of ordered substitution pairs (a, b), a in B, b != a_i, with
// (a_-i, b) in B.
std::uint64_t substitution_pair_count(const LabeledDataset& dataset,
                                      std::size_t feature);

// Sum over a in B and observed substitutes b of |v(a_-i, b) - v(a)|.
std::int64_t chi(const LabeledDataset& dataset, std::size_t feature);
// chi / |B|.
double chi_normalized(const LabeledDataset& dataset, std::size_t feature);
// 2 * sum over neighbor groups of wins * losses.
std::int64_t chi_win_loss_form(const LabeledDataset& dataset,
                               std::size_t feature);

// Signed state influence on a full-space binary dataset; raw drops the 1/|A|.
double zeta_state(const LabeledDataset& dataset, std::size_t feature,
                  StateIndex state, bool raw);
std::int64_t chi_state(const LabeledDataset& dataset, std::size_t feature,
                       StateIndex state);

double chi_weighted(const LabeledDataset& dataset, const WeightFunction& weights,
                    std::size_t feature);
double chi_weighted_conditional(
    const LabeledDataset& dataset, const WeightFunction& weights,
    std::size_t feature,
    ConditionalWeighting weighting = ConditionalWeighting::kPoint);
// 2 * sum over contexts of w(a_-i) w(W_a-i) w(L_a-i), paired with the same
// weighting convention.
double chi_weighted_product_form(
    const LabeledDataset& dataset, const WeightFunction& weights,
    std::size_t feature,
    ConditionalWeighting weighting = ConditionalWeighting::kPoint);

double chi_distance(const LabeledDataset& dataset,
                    const PseudoDistance& distance, std::size_t feature);

struct SummaryStats {
  double max = 0;
  double min = 0;
  double mean = 0;
  double median = 0;
  double stddev = 0;  // population
};

// Max, min, mean, median and population stddev. Throws kEmptyList.
SummaryStats stats_report(std::span<const double> values);

struct FeatureInfluence {
  std::string feature;
  double raw = 0;
  double normalized = 0;
};

struct StateInfluence {
  std::string feature;
  std::string state;
  double value = 0;
};

struct InfluenceReport {
  std::string measure;
  std::vector<FeatureInfluence> per_feature;
  std::vector<StateInfluence> per_state;
  SummaryStats stats;
};

// Compensated (Neumaier) running sum.
class KahanSum {
 public:
  void add(double x);
  double value() const { return sum_ + compensation_; }

 private:
  double sum_ = 0;
  double compensation_ = 0;
};

}  // namespace influence

#endif  // INFLUENCE_MEASURES_H_
