#include <doctest.h>

#include <cstdlib>
#include <random>

#include "influence/core.h"
#include "influence/error.h"
#include "test_util.h"

using namespace influence;
using influence::testing::all_profiles;
using influence::testing::random_binary;
using influence::testing::space_of;

namespace {

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const InfluenceError& e) {
    return e.code();
  }
  FAIL("expected an InfluenceError");
  return ErrorCode::kInvalidArgument;
}

}  // namespace

TEST_CASE("space construction validates its spec") {
  CHECK(code_of([] { build_space({}); }) == ErrorCode::kEmptySpec);
  CHECK(code_of([] { build_space({{"a", {"x"}}, {"a", {"y"}}}); }) ==
        ErrorCode::kDuplicateName);
  CHECK(code_of([] { build_space({{"a", {}}}); }) == ErrorCode::kEmptyStates);
  CHECK(code_of([] { build_space({{"a", {"x", "x"}}}); }) == ErrorCode::kDuplicateLabel);

  std::vector<Feature> huge;
  for (int i = 0; i < 70; ++i) huge.push_back({"f" + std::to_string(i), {"0", "1"}});
  CHECK(code_of([&] { build_space(huge); }) == ErrorCode::kSpaceTooLarge);
}

TEST_CASE("profile keys are mixed radix with the last feature least significant") {
  const FeatureSpace s = space_of({2, 3, 4});
  CHECK(s.profile_count() == 24);
  CHECK(s.stride(2) == 1);
  CHECK(s.stride(1) == 4);
  CHECK(s.stride(0) == 12);
  CHECK(encode(s, Profile{{1, 2, 3}}) == 23);
  CHECK(encode(s, Profile{{0, 0, 1}}) == 1);

  for (const auto& p : all_profiles(s)) {
    const ProfileKey k = encode(s, p);
    CHECK(decode(s, k) == p);
    for (std::size_t i = 0; i < 3; ++i) {
      CHECK(s.digit(k, i) == p[i]);
      for (StateIndex b = 0; b < s.state_count(i); ++b) {
        Profile q = p;
        q.states[i] = b;
        CHECK(s.with_state(k, i, b) == encode(s, q));
      }
    }
  }
  CHECK(code_of([&] { encode(s, Profile{{0, 3, 0}}); }) == ErrorCode::kInvalidProfile);
  CHECK(code_of([&] { encode(s, Profile{{0, 0}}); }) == ErrorCode::kInvalidProfile);
  CHECK_FALSE(is_valid(s, Profile{{2, 0, 0}}));
}

TEST_CASE("name lookups") {
  const FeatureSpace s = build_space({{"gender", {"F", "M"}}, {"age", {"18-24", "25+"}}});
  CHECK(s.feature_index("age") == 1);
  CHECK(s.state_index(1, "25+") == 1);
  CHECK_FALSE(s.find_feature("nope").has_value());
  CHECK(code_of([&] { s.feature_index("nope"); }) == ErrorCode::kUnknownFeature);
  CHECK(code_of([&] { s.state_index(0, "X"); }) == ErrorCode::kUnknownState);
}

TEST_CASE("dataset building merges equal duplicates and rejects conflicts") {
  const FeatureSpace s = space_of({2, 2});
  auto d = build_dataset(s, {{Profile{{0, 1}}, Value::binary(true)},
                             {Profile{{0, 1}}, Value::binary(true)},
                             {Profile{{1, 1}}, Value::binary(false)}});
  CHECK(d.size() == 2);
  CHECK(d.duplicates_dropped() == 1);
  CHECK_FALSE(d.is_full());
  CHECK(d.find(encode(s, Profile{{0, 0}})) == std::nullopt);
  REQUIRE(d.find(encode(s, Profile{{0, 1}})).has_value());
  CHECK(d.binary_value(*d.find(encode(s, Profile{{0, 1}}))) == 1);

  CHECK(code_of([&] {
          build_dataset(s, {{Profile{{0, 1}}, Value::binary(true)},
                            {Profile{{0, 1}}, Value::binary(false)}});
        }) == ErrorCode::kConflictingLabel);
  CHECK(code_of([&] {
          build_dataset(s, {{Profile{{0, 1}}, Value::binary(true)},
                            {Profile{{1, 1}}, Value::scalar(0.5)}});
        }) == ErrorCode::kMixedValueKinds);
  CHECK(code_of([&] {
          build_dataset(s, {{Profile{{0, 1}}, Value::vector({1, 2})},
                            {Profile{{1, 1}}, Value::vector({1, 2, 3})}});
        }) == ErrorCode::kDimensionMismatch);
  CHECK(code_of([&] { build_dataset(s, {}); }) == ErrorCode::kEmptyDataset);
  CHECK(code_of([&] {
          build_dataset(s, {{Profile{{0, 1}}, Value{ValueKind::kBinary, {0.5}}}});
        }) == ErrorCode::kInvalidArgument);
  CHECK(code_of([&] {
          build_dataset(s, {{Profile{{0, 1}}, Value::scalar(std::nan(""))}});
        }) == ErrorCode::kInvalidArgument);
}

TEST_CASE("full datasets respect the enumeration cap") {
  const FeatureSpace s = space_of({10, 10, 10});
  setenv("INFLUENCE_MAX_ENUM", "999", 1);
  CHECK(code_of([&] {
          build_full_dataset(s, [](const Profile&) { return Value::binary(false); });
        }) == ErrorCode::kCapExceeded);
  setenv("INFLUENCE_MAX_ENUM", "1000", 1);
  auto d = build_full_dataset(s, [](const Profile& p) { return Value::binary(p[0] > 4); });
  CHECK(d.is_full());
  unsetenv("INFLUENCE_MAX_ENUM");
  CHECK(enumeration_cap() == kDefaultEnumerationCap);
}

TEST_CASE("singleton dataset labels only the anchor") {
  const FeatureSpace s = space_of({3, 2});
  const auto d = singleton_dataset(s, Profile{{2, 1}});
  CHECK(d.is_full());
  int wins = 0;
  for (std::size_t p = 0; p < d.size(); ++p) wins += d.binary_value(p);
  CHECK(wins == 1);
  CHECK(d.binary_value(*d.find(encode(s, Profile{{2, 1}}))) == 1);
}

TEST_CASE("neighbor groups partition the dataset by context") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    const auto d = random_binary(rng, influence::testing::random_sizes(rng, 60), 0.6);
    for (std::size_t i = 0; i < d.space().feature_count(); ++i) {
      std::size_t covered = 0;
      for (const auto& g : neighbor_groups(d, i)) {
        covered += g.members.size();
        CHECK(g.win_count + g.loss_count == g.members.size());
        for (std::size_t m = 0; m < g.members.size(); ++m) {
          const ProfileKey k = d.key(g.members[m].point);
          CHECK(d.space().context_key(k, i) == g.context);
          CHECK(d.space().digit(k, i) == g.members[m].state);
          if (m > 0) CHECK(g.members[m - 1].state < g.members[m].state);
        }
      }
      CHECK(covered == d.size());
    }
  }
}

TEST_CASE("permutations must be bijections") {
  const auto d = build_full_dataset(space_of({3, 2}),
                                    [](const Profile& p) { return Value::binary(p[0] == 1); });
  const std::vector<StateIndex> bad{0, 0, 1};
  CHECK(code_of([&] { permute_feature_states(d, 0, bad); }) == ErrorCode::kNonBijective);
  const std::vector<std::size_t> short_sigma{0};
  CHECK(code_of([&] { permute_features(d, short_sigma); }) == ErrorCode::kNonBijective);

  const std::vector<StateIndex> tau{2, 0, 1};
  const auto moved = permute_feature_states(d, 0, tau);
  // old state 1 is now state 0
  CHECK(moved.binary_value(*moved.find(encode(moved.space(), Profile{{0, 1}}))) == 1);

  const std::vector<std::size_t> sigma{1, 0};
  const auto swapped = permute_features(d, sigma);
  CHECK(swapped.space().feature(0).name == "f2");
  CHECK(swapped.space().state_count(1) == 3);
  CHECK(swapped.binary_value(*swapped.find(encode(swapped.space(), Profile{{0, 1}}))) == 1);
  const std::vector<std::size_t> back{1, 0};
  CHECK(permute_features(swapped, back) == d);
}

TEST_CASE("dummy detection compares values within neighbor groups") {
  const auto d = build_full_dataset(space_of({2, 3}),
                                    [](const Profile& p) { return Value::binary(p[1] == 2); });
  CHECK(is_dummy(d, 0));
  CHECK_FALSE(is_dummy(d, 1));
}

TEST_CASE("error messages carry the code name") {
  const InfluenceError e(ErrorCode::kZeroVector, "boom");
  CHECK(std::string(e.what()) == "ZeroVector: boom");
  CHECK(ErrorCodeName(ErrorCode::kCapExceeded) == std::string("CapExceeded"));
}
