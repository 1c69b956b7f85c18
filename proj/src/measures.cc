#include "influence/measures.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <random>

#include "influence/error.h"

namespace influence {
namespace {

void require_binary(const LabeledDataset& dataset, const char* op) {
  if (!dataset.is_binary()) {
    throw InfluenceError(ErrorCode::kNonBinary,
                         std::string(op) + " needs binary values, got " +
                             std::string(value_kind_name(dataset.kind())));
  }
}

void require_full(const LabeledDataset& dataset, const char* op) {
  if (!dataset.is_full()) {
    throw InfluenceError(ErrorCode::kPartialDataset,
                         std::string(op) + " is defined on full spaces only");
  }
}

void require_feature(const LabeledDataset& dataset, std::size_t feature) {
  if (feature >= dataset.space().feature_count()) {
    throw InfluenceError(ErrorCode::kInvalidArgument, "feature out of range");
  }
}

void require_state(const LabeledDataset& dataset, std::size_t feature,
                   StateIndex state) {
  require_feature(dataset, feature);
  if (state >= dataset.space().state_count(feature)) {
    throw InfluenceError(ErrorCode::kInvalidState,
                         "state " + std::to_string(state) +
                             " out of range for feature '" +
                             dataset.space().feature(feature).name + "'");
  }
}

// Point weights of a group's members, in member order.
std::vector<double> member_weights(const LabeledDataset& dataset,
                                   const WeightFunction& weights,
                                   const NeighborGroup& g) {
  std::vector<double> out;
  out.reserve(g.members.size());
  for (const auto& m : g.members) out.push_back(weights.at(dataset.key(m.point)));
  return out;
}

}  // namespace

void KahanSum::add(double x) {
  const double t = sum_ + x;
  if (std::abs(sum_) >= std::abs(x)) {
    compensation_ += (sum_ - t) + x;
  } else {
    compensation_ += (x - t) + sum_;
  }
  sum_ = t;
}

void WeightFunction::set(ProfileKey key, double weight) {
  if (!(weight >= 0.0) || !std::isfinite(weight)) {
    throw InfluenceError(ErrorCode::kNegativeWeight,
                         "weights must be finite and nonnegative");
  }
  weights_[key] = weight;
}

double WeightFunction::at(ProfileKey key) const {
  auto it = weights_.find(key);
  if (it == weights_.end()) {
    throw InfluenceError(ErrorCode::kMissingWeight,
                         "no weight for profile key " + std::to_string(key));
  }
  return it->second;
}

WeightFunction WeightFunction::uniform(const LabeledDataset& dataset,
                                       double weight) {
  WeightFunction w;
  for (ProfileKey k : dataset.keys()) w.set(k, weight);
  return w;
}

WeightFunction WeightFunction::from_points(const LabeledDataset& dataset,
                                           std::span<const double> weights) {
  if (weights.size() != dataset.size()) {
    throw InfluenceError(ErrorCode::kMissingWeight,
                         "need one weight per observed profile");
  }
  WeightFunction w;
  for (std::size_t p = 0; p < dataset.size(); ++p) w.set(dataset.key(p), weights[p]);
  return w;
}

WeightFunction WeightFunction::scaled(double alpha) const {
  WeightFunction w;
  for (const auto& [k, x] : weights_) w.set(k, alpha * x);
  return w;
}

PseudoDistance PseudoDistance::table(std::size_t k, std::vector<double> matrix) {
  if (k == 0 || matrix.size() != k * k) {
    throw InfluenceError(ErrorCode::kInvalidDistanceTable,
                         "table must be a nonempty k x k matrix");
  }
  auto at = [&](std::size_t a, std::size_t b) { return matrix[a * k + b]; };
  for (std::size_t a = 0; a < k; ++a) {
    if (at(a, a) != 0.0) {
      throw InfluenceError(ErrorCode::kInvalidDistanceTable,
                           "diagonal must be zero");
    }
    for (std::size_t b = 0; b < k; ++b) {
      if (!(at(a, b) >= 0.0) || !std::isfinite(at(a, b))) {
        throw InfluenceError(ErrorCode::kInvalidDistanceTable,
                             "distances must be finite and nonnegative");
      }
      if (at(a, b) != at(b, a)) {
        throw InfluenceError(ErrorCode::kInvalidDistanceTable,
                             "table is not symmetric");
      }
    }
  }
  auto triangle_ok = [&](std::size_t a, std::size_t b, std::size_t c) {
    const double direct = at(a, c);
    const double detour = at(a, b) + at(b, c);
    return direct <= detour * (1 + 1e-12);
  };
  if (k <= 64) {
    for (std::size_t a = 0; a < k; ++a)
      for (std::size_t b = 0; b < k; ++b)
        for (std::size_t c = 0; c < k; ++c)
          if (!triangle_ok(a, b, c)) {
            throw InfluenceError(ErrorCode::kInvalidDistanceTable,
                                 "triangle inequality violated");
          }
  } else {
    std::mt19937_64 rng(0x5eed);
    for (int t = 0; t < 100000; ++t) {
      const std::size_t a = rng() % k, b = rng() % k, c = rng() % k;
      if (!triangle_ok(a, b, c)) {
        throw InfluenceError(ErrorCode::kInvalidDistanceTable,
                             "triangle inequality violated");
      }
    }
  }
  PseudoDistance d(Kind::kTable);
  d.table_size_ = k;
  d.table_ = std::move(matrix);
  return d;
}

std::string PseudoDistance::name() const {
  switch (kind_) {
    case Kind::kDiscrete: return "discrete";
    case Kind::kAbsolute: return "abs";
    case Kind::kCosine: return "cosine";
    case Kind::kTable: return "table";
  }
  return "unknown";
}

void PseudoDistance::check_compatible(ValueKind kind) const {
  const bool ok = kind_ == Kind::kDiscrete ||
                  (kind_ == Kind::kCosine && kind == ValueKind::kVector) ||
                  ((kind_ == Kind::kAbsolute || kind_ == Kind::kTable) &&
                   kind != ValueKind::kVector);
  if (!ok) {
    throw InfluenceError(ErrorCode::kIncompatibleDistance,
                         name() + " distance cannot compare " +
                             std::string(value_kind_name(kind)) + " values");
  }
}

double PseudoDistance::operator()(std::span<const double> x,
                                  std::span<const double> y) const {
  if (x.size() != y.size()) {
    throw InfluenceError(ErrorCode::kDimensionMismatch,
                         "values differ in dimension");
  }
  switch (kind_) {
    case Kind::kDiscrete:
      for (std::size_t k = 0; k < x.size(); ++k) {
        if (std::bit_cast<std::uint64_t>(x[k]) !=
            std::bit_cast<std::uint64_t>(y[k])) {
          return 1.0;
        }
      }
      return 0.0;
    case Kind::kAbsolute:
      return std::abs(x[0] - y[0]);
    case Kind::kCosine:
      return cosine_distance(x, y);
    case Kind::kTable: {
      const double a = x[0], b = y[0];
      if (a != std::floor(a) || b != std::floor(b) || a < 0 || b < 0 ||
          a >= static_cast<double>(table_size_) ||
          b >= static_cast<double>(table_size_)) {
        throw InfluenceError(ErrorCode::kIncompatibleDistance,
                             "value outside the distance table's categories");
      }
      return table_[static_cast<std::size_t>(a) * table_size_ +
                    static_cast<std::size_t>(b)];
    }
  }
  return 0.0;
}

double cosine_distance(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) {
    throw InfluenceError(ErrorCode::kDimensionMismatch,
                         "cosine distance needs equal dimensions");
  }
  KahanSum dot, xx, yy;
  for (std::size_t k = 0; k < x.size(); ++k) {
    dot.add(x[k] * y[k]);
    xx.add(x[k] * x[k]);
    yy.add(y[k] * y[k]);
  }
  if (xx.value() == 0.0 || yy.value() == 0.0) {
    throw InfluenceError(ErrorCode::kZeroVector,
                         "cosine distance is undefined for a zero vector");
  }
  const double cos = dot.value() / (std::sqrt(xx.value()) * std::sqrt(yy.value()));
  return 1.0 - std::clamp(cos, -1.0, 1.0);
}

std::uint64_t substitution_pair_count(const LabeledDataset& dataset,
                                      std::size_t feature) {
  std::uint64_t pairs = 0;
  for (const auto& g : neighbor_groups(dataset, feature)) {
    pairs += g.members.size() * (g.members.size() - 1);
  }
  return pairs;
}

std::int64_t chi(const LabeledDataset& dataset, std::size_t feature) {
  require_binary(dataset, "chi");
  std::int64_t total = 0;
  for (const auto& g : neighbor_groups(dataset, feature)) {
    for (const auto& a : g.members) {
      const int va = dataset.binary_value(a.point);
      for (const auto& b : g.members) {
        // b == a_i contributes |v(a) - v(a)| = 0.
        if (b.point == a.point) continue;
        total += std::abs(dataset.binary_value(b.point) - va);
      }
    }
  }
  return total;
}

double chi_normalized(const LabeledDataset& dataset, std::size_t feature) {
  return static_cast<double>(chi(dataset, feature)) /
         static_cast<double>(dataset.size());
}

std::int64_t chi_win_loss_form(const LabeledDataset& dataset,
                               std::size_t feature) {
  require_binary(dataset, "chi_win_loss_form");
  std::int64_t total = 0;
  for (const auto& g : neighbor_groups(dataset, feature)) {
    total += static_cast<std::int64_t>(g.win_count * g.loss_count);
  }
  return 2 * total;
}

double zeta_state(const LabeledDataset& dataset, std::size_t feature,
                  StateIndex state, bool raw) {
  require_binary(dataset, "zeta_state");
  require_full(dataset, "zeta_state");
  require_state(dataset, feature, state);
  const auto& space = dataset.space();
  std::int64_t total = 0;
  for (std::size_t p = 0; p < dataset.size(); ++p) {
    const ProfileKey substituted = space.with_state(dataset.key(p), feature, state);
    total += dataset.binary_value(*dataset.find(substituted)) -
             dataset.binary_value(p);
  }
  const double value = static_cast<double>(total);
  return raw ? value : value / static_cast<double>(dataset.size());
}

std::int64_t chi_state(const LabeledDataset& dataset, std::size_t feature,
                       StateIndex state) {
  require_binary(dataset, "chi_state");
  require_state(dataset, feature, state);
  std::int64_t total = 0;
  for (const auto& g : neighbor_groups(dataset, feature)) {
    auto it = std::find_if(g.members.begin(), g.members.end(),
                           [&](const NeighborMember& m) { return m.state == state; });
    if (it == g.members.end()) continue;
    const int vb = dataset.binary_value(it->point);
    for (const auto& a : g.members) {
      total += std::abs(vb - dataset.binary_value(a.point));
    }
  }
  return total;
}

double chi_weighted(const LabeledDataset& dataset, const WeightFunction& weights,
                    std::size_t feature) {
  require_binary(dataset, "chi_weighted");
  KahanSum total;
  for (const auto& g : neighbor_groups(dataset, feature)) {
    const auto w = member_weights(dataset, weights, g);
    for (std::size_t x = 0; x < g.members.size(); ++x) {
      const int va = dataset.binary_value(g.members[x].point);
      int flips = 0;
      for (const auto& b : g.members) {
        flips += std::abs(dataset.binary_value(b.point) - va);
      }
      total.add(w[x] * flips);
    }
  }
  return total.value();
}

double chi_weighted_conditional(const LabeledDataset& dataset,
                                const WeightFunction& weights,
                                std::size_t feature,
                                ConditionalWeighting weighting) {
  require_binary(dataset, "chi_weighted_conditional");
  require_full(dataset, "chi_weighted_conditional");
  KahanSum total;
  for (const auto& g : neighbor_groups(dataset, feature)) {
    const auto w = member_weights(dataset, weights, g);
    double context_weight = 1.0;
    if (weighting == ConditionalWeighting::kConditional) {
      KahanSum m;
      for (double x : w) m.add(x);
      context_weight = m.value();
      if (context_weight == 0.0) continue;
    }
    for (std::size_t x = 0; x < g.members.size(); ++x) {
      const int va = dataset.binary_value(g.members[x].point);
      KahanSum inner;
      for (std::size_t y = 0; y < g.members.size(); ++y) {
        if (dataset.binary_value(g.members[y].point) != va) {
          inner.add(w[y] / context_weight);
        }
      }
      total.add(w[x] * inner.value());
    }
  }
  return total.value();
}

double chi_weighted_product_form(const LabeledDataset& dataset,
                                 const WeightFunction& weights,
                                 std::size_t feature,
                                 ConditionalWeighting weighting) {
  require_binary(dataset, "chi_weighted_product_form");
  require_full(dataset, "chi_weighted_product_form");
  KahanSum total;
  for (const auto& g : neighbor_groups(dataset, feature)) {
    const auto w = member_weights(dataset, weights, g);
    KahanSum win, loss;
    for (std::size_t x = 0; x < g.members.size(); ++x) {
      (dataset.binary_value(g.members[x].point) == 1 ? win : loss).add(w[x]);
    }
    if (weighting == ConditionalWeighting::kPoint) {
      total.add(win.value() * loss.value());
    } else {
      const double context_weight = win.value() + loss.value();
      if (context_weight == 0.0) continue;
      total.add(context_weight * (win.value() / context_weight) *
                (loss.value() / context_weight));
    }
  }
  return 2.0 * total.value();
}

double chi_distance(const LabeledDataset& dataset,
                    const PseudoDistance& distance, std::size_t feature) {
  distance.check_compatible(dataset.kind());
  KahanSum total;
  for (const auto& g : neighbor_groups(dataset, feature)) {
    for (const auto& a : g.members) {
      const auto va = dataset.value(a.point);
      for (const auto& b : g.members) {
        if (b.point == a.point) continue;
        total.add(distance(dataset.value(b.point), va));
      }
    }
  }
  return total.value();
}

SummaryStats stats_report(std::span<const double> values) {
  if (values.empty()) {
    throw InfluenceError(ErrorCode::kEmptyList, "no values to summarize");
  }
  SummaryStats s;
  s.max = *std::max_element(values.begin(), values.end());
  s.min = *std::min_element(values.begin(), values.end());
  KahanSum sum;
  for (double x : values) sum.add(x);
  const double n = static_cast<double>(values.size());
  s.mean = sum.value() / n;
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  const std::size_t mid = sorted.size() / 2;
  s.median = sorted.size() % 2 == 1 ? sorted[mid]
                                    : (sorted[mid - 1] + sorted[mid]) / 2.0;
  KahanSum sq;
  for (double x : values) sq.add((x - s.mean) * (x - s.mean));
  s.stddev = std::sqrt(sq.value() / n);
  return s;
}

}  // namespace influence
