#include "influence/core.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdlib>
#include <numeric>
#include <set>
#include <utility>

#include "influence/error.h"

namespace influence {
namespace {

void check_bijection(std::span<const std::size_t> perm, std::size_t n,
                     const char* what) {
  if (perm.size() != n) {
    throw InfluenceError(ErrorCode::kNonBijective,
                         std::string(what) + " has wrong length");
  }
  std::vector<bool> seen(n, false);
  for (std::size_t image : perm) {
    if (image >= n || seen[image]) {
      throw InfluenceError(ErrorCode::kNonBijective,
                           std::string(what) + " is not a bijection");
    }
    seen[image] = true;
  }
}

void check_value(const Value& v) {
  if (v.data.empty()) {
    throw InfluenceError(ErrorCode::kInvalidArgument, "empty value");
  }
  for (double x : v.data) {
    if (!std::isfinite(x)) {
      throw InfluenceError(ErrorCode::kInvalidArgument, "non-finite value");
    }
  }
  if (v.kind == ValueKind::kBinary &&
      (v.data.size() != 1 || (v.data[0] != 0.0 && v.data[0] != 1.0))) {
    throw InfluenceError(ErrorCode::kInvalidArgument,
                         "binary values must be 0 or 1");
  }
  if (v.kind == ValueKind::kScalar && v.data.size() != 1) {
    throw InfluenceError(ErrorCode::kInvalidArgument,
                         "scalar values carry exactly one number");
  }
}

bool same_bits(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) return false;
  for (std::size_t k = 0; k < a.size(); ++k) {
    if (std::bit_cast<std::uint64_t>(a[k]) !=
        std::bit_cast<std::uint64_t>(b[k])) {
      return false;
    }
  }
  return true;
}

}  // namespace

std::uint64_t enumeration_cap() {
  if (const char* env = std::getenv("INFLUENCE_MAX_ENUM")) {
    char* end = nullptr;
    const unsigned long long parsed = std::strtoull(env, &end, 10);
    if (end != env && *end == '\0' && parsed > 0) return parsed;
  }
  return kDefaultEnumerationCap;
}

std::optional<std::size_t> FeatureSpace::find_feature(
    std::string_view name) const {
  for (std::size_t i = 0; i < features_.size(); ++i) {
    if (features_[i].name == name) return i;
  }
  return std::nullopt;
}

std::size_t FeatureSpace::feature_index(std::string_view name) const {
  if (auto i = find_feature(name)) return *i;
  throw InfluenceError(ErrorCode::kUnknownFeature,
                       "no feature named '" + std::string(name) + "'");
}

StateIndex FeatureSpace::state_index(std::size_t feature,
                                     std::string_view label) const {
  const auto& states = features_.at(feature).states;
  auto it = std::find(states.begin(), states.end(), label);
  if (it == states.end()) {
    throw InfluenceError(ErrorCode::kUnknownState,
                         "feature '" + features_[feature].name +
                             "' has no state '" + std::string(label) + "'");
  }
  return static_cast<StateIndex>(it - states.begin());
}

bool operator==(const FeatureSpace& a, const FeatureSpace& b) {
  if (a.features_.size() != b.features_.size()) return false;
  for (std::size_t i = 0; i < a.features_.size(); ++i) {
    if (a.features_[i].name != b.features_[i].name ||
        a.features_[i].states != b.features_[i].states) {
      return false;
    }
  }
  return true;
}

FeatureSpace build_space(std::vector<Feature> spec) {
  if (spec.empty()) {
    throw InfluenceError(ErrorCode::kEmptySpec, "no features given");
  }
  std::set<std::string> names;
  for (const auto& f : spec) {
    if (!names.insert(f.name).second) {
      throw InfluenceError(ErrorCode::kDuplicateName,
                           "feature '" + f.name + "' appears twice");
    }
    if (f.states.empty()) {
      throw InfluenceError(ErrorCode::kEmptyStates,
                           "feature '" + f.name + "' has no states");
    }
    std::set<std::string> labels(f.states.begin(), f.states.end());
    if (labels.size() != f.states.size()) {
      throw InfluenceError(ErrorCode::kDuplicateLabel,
                           "feature '" + f.name + "' repeats a state label");
    }
  }

  FeatureSpace space;
  space.features_ = std::move(spec);
  const std::size_t n = space.features_.size();
  space.strides_.assign(n, 1);
  std::uint64_t total = 1;
  for (std::size_t k = n; k-- > 0;) {
    space.strides_[k] = total;
    const std::uint64_t size = space.features_[k].states.size();
    if (total > (std::uint64_t{1} << 62) / size) {
      throw InfluenceError(ErrorCode::kSpaceTooLarge,
                           "profile count does not fit in 62 bits");
    }
    total *= size;
  }
  space.profile_count_ = total;
  return space;
}

bool is_valid(const FeatureSpace& space, const Profile& profile) {
  if (profile.size() != space.feature_count()) return false;
  for (std::size_t i = 0; i < profile.size(); ++i) {
    if (profile[i] >= space.state_count(i)) return false;
  }
  return true;
}

ProfileKey encode(const FeatureSpace& space, const Profile& profile) {
  if (!is_valid(space, profile)) {
    throw InfluenceError(ErrorCode::kInvalidProfile,
                         "profile does not fit the feature space");
  }
  ProfileKey key = 0;
  for (std::size_t i = 0; i < profile.size(); ++i) {
    key += std::uint64_t{profile[i]} * space.stride(i);
  }
  return key;
}

Profile decode(const FeatureSpace& space, ProfileKey key) {
  Profile p;
  p.states.resize(space.feature_count());
  for (std::size_t i = 0; i < p.states.size(); ++i) {
    p.states[i] = space.digit(key, i);
  }
  return p;
}

std::string_view value_kind_name(ValueKind kind) {
  switch (kind) {
    case ValueKind::kBinary: return "binary";
    case ValueKind::kScalar: return "scalar";
    case ValueKind::kVector: return "vector";
  }
  return "unknown";
}

bool operator==(const Value& a, const Value& b) {
  return a.kind == b.kind && same_bits(a.data, b.data);
}

Value LabeledDataset::value_object(std::size_t point) const {
  auto v = value(point);
  return Value{kind_, std::vector<double>(v.begin(), v.end())};
}

std::optional<std::size_t> LabeledDataset::find(ProfileKey key) const {
  if (is_full()) {
    if (key < keys_.size()) return static_cast<std::size_t>(key);
    return std::nullopt;
  }
  auto it = index_.find(key);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

void LabeledDataset::build_index() {
  index_.clear();
  if (is_full()) return;
  index_.reserve(keys_.size());
  for (std::size_t p = 0; p < keys_.size(); ++p) index_.emplace(keys_[p], p);
}

bool operator==(const LabeledDataset& a, const LabeledDataset& b) {
  return a.space_ == b.space_ && a.kind_ == b.kind_ &&
         a.dimension_ == b.dimension_ && a.keys_ == b.keys_ &&
         same_bits(a.values_, b.values_);
}

LabeledDataset make_dataset_from_sorted(FeatureSpace space, ValueKind kind,
                                        std::size_t dimension,
                                        std::vector<ProfileKey> keys,
                                        std::vector<double> values) {
  if (keys.empty()) {
    throw InfluenceError(ErrorCode::kEmptyDataset, "no observed profiles");
  }
  LabeledDataset d;
  d.space_ = std::move(space);
  d.kind_ = kind;
  d.dimension_ = dimension;
  d.keys_ = std::move(keys);
  d.values_ = std::move(values);
  d.build_index();
  return d;
}

LabeledDataset build_dataset(FeatureSpace space, std::vector<Record> records) {
  if (records.empty()) {
    throw InfluenceError(ErrorCode::kEmptyDataset, "no records given");
  }
  const ValueKind kind = records.front().value.kind;
  const std::size_t dimension = records.front().value.data.size();
  std::vector<std::pair<ProfileKey, std::size_t>> order;
  order.reserve(records.size());
  for (std::size_t r = 0; r < records.size(); ++r) {
    const auto& rec = records[r];
    check_value(rec.value);
    if (rec.value.kind != kind) {
      throw InfluenceError(ErrorCode::kMixedValueKinds,
                           "records mix value kinds");
    }
    if (rec.value.data.size() != dimension) {
      throw InfluenceError(ErrorCode::kDimensionMismatch,
                           "vector values differ in dimension");
    }
    order.emplace_back(encode(space, rec.profile), r);
  }
  std::stable_sort(order.begin(), order.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });

  std::vector<ProfileKey> keys;
  std::vector<double> values;
  keys.reserve(order.size());
  values.reserve(order.size() * dimension);
  std::size_t duplicates = 0;
  for (std::size_t k = 0; k < order.size(); ++k) {
    const auto& data = records[order[k].second].value.data;
    if (!keys.empty() && keys.back() == order[k].first) {
      std::span<const double> kept(values.data() + values.size() - dimension,
                                   dimension);
      if (!same_bits(kept, data)) {
        throw InfluenceError(ErrorCode::kConflictingLabel,
                             "profile observed with two different values");
      }
      ++duplicates;
      continue;
    }
    keys.push_back(order[k].first);
    values.insert(values.end(), data.begin(), data.end());
  }
  LabeledDataset d = make_dataset_from_sorted(std::move(space), kind, dimension,
                                              std::move(keys), std::move(values));
  d.duplicates_dropped_ = duplicates;
  return d;
}

LabeledDataset build_full_dataset(
    FeatureSpace space, const std::function<Value(const Profile&)>& label) {
  const std::uint64_t total = space.profile_count();
  if (total > enumeration_cap()) {
    throw InfluenceError(ErrorCode::kCapExceeded,
                         "space has " + std::to_string(total) +
                             " profiles, above the enumeration cap of " +
                             std::to_string(enumeration_cap()));
  }
  std::vector<ProfileKey> keys(total);
  std::iota(keys.begin(), keys.end(), ProfileKey{0});
  std::vector<double> values;
  ValueKind kind = ValueKind::kBinary;
  std::size_t dimension = 0;
  for (ProfileKey key = 0; key < total; ++key) {
    Value v = label(decode(space, key));
    check_value(v);
    if (key == 0) {
      kind = v.kind;
      dimension = v.data.size();
      values.reserve(total * dimension);
    } else if (v.kind != kind) {
      throw InfluenceError(ErrorCode::kMixedValueKinds,
                           "labeling mixes value kinds");
    } else if (v.data.size() != dimension) {
      throw InfluenceError(ErrorCode::kDimensionMismatch,
                           "vector values differ in dimension");
    }
    values.insert(values.end(), v.data.begin(), v.data.end());
  }
  return make_dataset_from_sorted(std::move(space), kind, dimension,
                                  std::move(keys), std::move(values));
}

LabeledDataset singleton_dataset(const FeatureSpace& space,
                                 const Profile& anchor) {
  const ProfileKey anchor_key = encode(space, anchor);
  return build_full_dataset(space, [&](const Profile& p) {
    return Value::binary(encode(space, p) == anchor_key);
  });
}

LabeledDataset permute_feature_states(const LabeledDataset& dataset,
                                      std::size_t feature,
                                      std::span<const StateIndex> tau) {
  const auto& space = dataset.space();
  if (feature >= space.feature_count()) {
    throw InfluenceError(ErrorCode::kInvalidArgument, "feature out of range");
  }
  std::vector<std::size_t> perm(tau.begin(), tau.end());
  check_bijection(perm, space.state_count(feature), "state permutation");

  const std::size_t dim = dataset.dimension();
  std::vector<std::pair<ProfileKey, std::size_t>> order;
  order.reserve(dataset.size());
  for (std::size_t p = 0; p < dataset.size(); ++p) {
    const ProfileKey k = dataset.key(p);
    order.emplace_back(space.with_state(k, feature, tau[space.digit(k, feature)]),
                       p);
  }
  std::sort(order.begin(), order.end());
  std::vector<ProfileKey> keys;
  std::vector<double> values;
  keys.reserve(order.size());
  values.reserve(order.size() * dim);
  for (const auto& [k, p] : order) {
    keys.push_back(k);
    auto v = dataset.value(p);
    values.insert(values.end(), v.begin(), v.end());
  }
  return make_dataset_from_sorted(space, dataset.kind(), dim, std::move(keys),
                                  std::move(values));
}

LabeledDataset permute_features(const LabeledDataset& dataset,
                                std::span<const std::size_t> sigma) {
  const auto& space = dataset.space();
  const std::size_t n = space.feature_count();
  check_bijection(sigma, n, "feature permutation");

  std::vector<Feature> features(n);
  for (std::size_t j = 0; j < n; ++j) features[sigma[j]] = space.feature(j);
  FeatureSpace permuted = build_space(std::move(features));

  const std::size_t dim = dataset.dimension();
  std::vector<std::pair<ProfileKey, std::size_t>> order;
  order.reserve(dataset.size());
  Profile moved;
  moved.states.resize(n);
  for (std::size_t p = 0; p < dataset.size(); ++p) {
    const ProfileKey k = dataset.key(p);
    for (std::size_t j = 0; j < n; ++j) moved.states[sigma[j]] = space.digit(k, j);
    order.emplace_back(encode(permuted, moved), p);
  }
  std::sort(order.begin(), order.end());
  std::vector<ProfileKey> keys;
  std::vector<double> values;
  keys.reserve(order.size());
  values.reserve(order.size() * dim);
  for (const auto& [k, p] : order) {
    keys.push_back(k);
    auto v = dataset.value(p);
    values.insert(values.end(), v.begin(), v.end());
  }
  return make_dataset_from_sorted(std::move(permuted), dataset.kind(), dim,
                                  std::move(keys), std::move(values));
}

std::vector<NeighborGroup> neighbor_groups(const LabeledDataset& dataset,
                                           std::size_t feature) {
  const auto& space = dataset.space();
  if (feature >= space.feature_count()) {
    throw InfluenceError(ErrorCode::kInvalidArgument, "feature out of range");
  }
  struct Entry {
    ProfileKey context;
    StateIndex state;
    std::size_t point;
  };
  std::vector<Entry> entries;
  entries.reserve(dataset.size());
  for (std::size_t p = 0; p < dataset.size(); ++p) {
    const ProfileKey k = dataset.key(p);
    entries.push_back({space.context_key(k, feature), space.digit(k, feature), p});
  }
  // Keys are sorted, so only the last feature's groups are already contiguous.
  std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
    return a.context != b.context ? a.context < b.context : a.state < b.state;
  });

  std::vector<NeighborGroup> groups;
  for (const Entry& e : entries) {
    if (groups.empty() || groups.back().context != e.context) {
      groups.push_back(NeighborGroup{feature, e.context, {}, 0, 0});
    }
    auto& g = groups.back();
    g.members.push_back({e.state, e.point});
    if (dataset.is_binary()) {
      if (dataset.binary_value(e.point) == 1) {
        ++g.win_count;
      } else {
        ++g.loss_count;
      }
    }
  }
  return groups;
}

bool is_dummy(const LabeledDataset& dataset, std::size_t feature) {
  for (const auto& g : neighbor_groups(dataset, feature)) {
    const auto first = dataset.value(g.members.front().point);
    for (const auto& m : g.members) {
      if (!same_bits(first, dataset.value(m.point))) return false;
    }
  }
  return true;
}

}  // namespace influence
