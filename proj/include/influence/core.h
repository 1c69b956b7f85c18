#ifndef INFLUENCE_CORE_H_
#define INFLUENCE_CORE_H_

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace influence {

using StateIndex = std::uint32_t;
// Mixed-radix encoding of a profile; the last feature is least significant,
// so key order equals lexicographic profile order.
using ProfileKey = std::uint64_t;

inline constexpr std::uint64_t kDefaultEnumerationCap = 10'000'000;

// Cap on the number of profiles a full-space constructor may enumerate.
// INFLUENCE_MAX_ENUM overrides the default when set to a positive integer.
std::uint64_t enumeration_cap();

struct Feature {
  std::string name;
  std::vector<std::string> states;
};

class FeatureSpace {
 public:
  FeatureSpace() = default;

  std::size_t feature_count() const { return features_.size(); }
  const Feature& feature(std::size_t i) const { return features_.at(i); }
  const std::vector<Feature>& features() const { return features_; }
  std::size_t state_count(std::size_t i) const {
    return features_.at(i).states.size();
  }
  std::uint64_t profile_count() const { return profile_count_; }
  std::uint64_t stride(std::size_t i) const { return strides_.at(i); }

  std::optional<std::size_t> find_feature(std::string_view name) const;
  // Throws kUnknownFeature.
  std::size_t feature_index(std::string_view name) const;
  // Throws kUnknownState.
  StateIndex state_index(std::size_t feature, std::string_view label) const;

  StateIndex digit(ProfileKey key, std::size_t feature) const {
    return static_cast<StateIndex>((key / strides_[feature]) %
                                   features_[feature].states.size());
  }
  ProfileKey with_state(ProfileKey key, std::size_t feature,
                        StateIndex state) const {
    return key - std::uint64_t{digit(key, feature)} * strides_[feature] +
           std::uint64_t{state} * strides_[feature];
  }
  // Key with the given feature's coordinate zeroed: identifies a_-i.
  ProfileKey context_key(ProfileKey key, std::size_t feature) const {
    return with_state(key, feature, 0);
  }

  friend bool operator==(const FeatureSpace& a, const FeatureSpace& b);

 private:
  friend FeatureSpace build_space(std::vector<Feature> spec);

  std::vector<Feature> features_;
  std::vector<std::uint64_t> strides_;
  std::uint64_t profile_count_ = 0;
};

struct Profile {
  std::vector<StateIndex> states;

  std::size_t size() const { return states.size(); }
  StateIndex operator[](std::size_t i) const { return states[i]; }
  auto operator<=>(const Profile&) const = default;
};

bool is_valid(const FeatureSpace& space, const Profile& profile);
// Throws kInvalidProfile for malformed profiles.
ProfileKey encode(const FeatureSpace& space, const Profile& profile);
Profile decode(const FeatureSpace& space, ProfileKey key);

enum class ValueKind { kBinary, kScalar, kVector };

std::string_view value_kind_name(ValueKind kind);

// Binary values are stored as exact 0.0 / 1.0.
struct Value {
  ValueKind kind = ValueKind::kBinary;
  std::vector<double> data;

  static Value binary(bool b) { return {ValueKind::kBinary, {b ? 1.0 : 0.0}}; }
  static Value scalar(double x) { return {ValueKind::kScalar, {x}}; }
  static Value vector(std::vector<double> xs) {
    return {ValueKind::kVector, std::move(xs)};
  }

  // Bitwise comparison of the payload.
  friend bool operator==(const Value& a, const Value& b);
};

struct Record {
  Profile profile;
  Value value;
};

// Observed profiles B with their values. Immutable once built.
class LabeledDataset {
 public:
  const FeatureSpace& space() const { return space_; }
  ValueKind kind() const { return kind_; }
  bool is_binary() const { return kind_ == ValueKind::kBinary; }
  std::size_t dimension() const { return dimension_; }
  // |B|.
  std::size_t size() const { return keys_.size(); }
  // True when B = A.
  bool is_full() const { return keys_.size() == space_.profile_count(); }

  ProfileKey key(std::size_t point) const { return keys_[point]; }
  std::span<const ProfileKey> keys() const { return keys_; }
  Profile profile(std::size_t point) const { return decode(space_, keys_[point]); }
  std::span<const double> value(std::size_t point) const {
    return {values_.data() + point * dimension_, dimension_};
  }
  Value value_object(std::size_t point) const;
  // Binary datasets only.
  int binary_value(std::size_t point) const {
    return values_[point] != 0.0 ? 1 : 0;
  }

  // Exact membership lookup of a key in B.
  std::optional<std::size_t> find(ProfileKey key) const;

  // Equal-valued duplicate records collapsed while building.
  std::size_t duplicates_dropped() const { return duplicates_dropped_; }

  friend bool operator==(const LabeledDataset& a, const LabeledDataset& b);

 private:
  friend LabeledDataset build_dataset(FeatureSpace space,
                                      std::vector<Record> records);
  friend LabeledDataset build_full_dataset(
      FeatureSpace space, const std::function<Value(const Profile&)>& label);
  friend LabeledDataset make_dataset_from_sorted(
      FeatureSpace space, ValueKind kind, std::size_t dimension,
      std::vector<ProfileKey> keys, std::vector<double> values);

  void build_index();

  FeatureSpace space_;
  ValueKind kind_ = ValueKind::kBinary;
  std::size_t dimension_ = 1;
  std::vector<ProfileKey> keys_;  // sorted ascending
  std::vector<double> values_;    // size() * dimension_, row-major
  std::unordered_map<ProfileKey, std::size_t> index_;  // empty when full
  std::size_t duplicates_dropped_ = 0;
};

struct NeighborMember {
  StateIndex state;
  std::size_t point;  // index into the dataset
};

// Observed profiles sharing a_-i.
struct NeighborGroup {
  std::size_t feature = 0;
  ProfileKey context = 0;  // key with feature's coordinate zeroed
  std::vector<NeighborMember> members;  // ascending by state
  // Binary datasets only; zero otherwise.
  std::size_t win_count = 0;
  std::size_t loss_count = 0;
};

FeatureSpace build_space(std::vector<Feature> spec);

LabeledDataset build_dataset(FeatureSpace space, std::vector<Record> records);

// Labels every profile of the space. Throws kCapExceeded above the cap.
LabeledDataset build_full_dataset(
    FeatureSpace space, const std::function<Value(const Profile&)>& label);

// Trusted constructor: keys strictly ascending, values validated by caller.
LabeledDataset make_dataset_from_sorted(FeatureSpace space, ValueKind kind,
                                        std::size_t dimension,
                                        std::vector<ProfileKey> keys,
                                        std::vector<double> values);

// U_a: value 1 at the anchor, 0 elsewhere, over the full space.
LabeledDataset singleton_dataset(const FeatureSpace& space,
                                 const Profile& anchor);

// tau[old_state] = new_state for feature i.
LabeledDataset permute_feature_states(const LabeledDataset& dataset,
                                      std::size_t feature,
                                      std::span<const StateIndex> tau);

// sigma[old_feature] = new_feature position. State domains travel with their
// features.
LabeledDataset permute_features(const LabeledDataset& dataset,
                                std::span<const std::size_t> sigma);

std::vector<NeighborGroup> neighbor_groups(const LabeledDataset& dataset,
                                           std::size_t feature);

bool is_dummy(const LabeledDataset& dataset, std::size_t feature);

}  // namespace influence

#endif  // INFLUENCE_CORE_H_
