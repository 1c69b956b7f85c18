#include <doctest.h>

#include <atomic>
#include <cmath>
#include <random>
#include <stdexcept>

#include "influence/error.h"
#include "influence/estimators.h"
#include "influence/measures.h"
#include "influence/rng.h"
#include "test_util.h"

using namespace influence;
namespace t = influence::testing;

TEST_CASE("Hoeffding half width") {
  // range * sqrt(ln(2/0.05) / (2n))
  CHECK(hoeffding_half_width(1.0, 1000, 0.95) ==
        doctest::Approx(std::sqrt(std::log(40.0) / 2000.0)));
  CHECK(hoeffding_half_width(4.0, 1000, 0.95) ==
        doctest::Approx(4 * hoeffding_half_width(1.0, 1000, 0.95)));
  CHECK(hoeffding_half_width(1.0, 4000, 0.95) ==
        doctest::Approx(0.5 * hoeffding_half_width(1.0, 1000, 0.95)));
  CHECK(hoeffding_half_width(1.0, 0, 0.95) == 0.0);
}

TEST_CASE("rng recipe is fixed") {
  BlockRng a(derive_seed(1, 2, 3)), b(derive_seed(1, 2, 3)), c(derive_seed(1, 2, 4));
  for (int k = 0; k < 100; ++k) {
    const double x = a.uniform01();
    CHECK(x == b.uniform01());
    CHECK(x >= 0.0);
    CHECK(x < 1.0);
  }
  CHECK(a.next() != c.next());
  // mt19937_64 seeded with 5489 yields this as its 10000th draw.
  std::mt19937_64 reference(5489);
  reference.discard(9999);
  CHECK(reference() == 9981545732273789042ULL);
  BlockRng r(7);
  for (int k = 0; k < 1000; ++k) CHECK(r.below(3) < 3);
}

TEST_CASE("blocks run once each and errors propagate") {
  std::vector<std::atomic<int>> hits(100);
  for_each_block(100, [&](std::size_t b) { hits[b]++; });
  for (auto& h : hits) CHECK(h.load() == 1);
  CHECK_THROWS_AS(for_each_block(10,
                                 [](std::size_t b) {
                                   if (b == 7) throw std::runtime_error("x");
                                 }),
                  std::runtime_error);
}

TEST_CASE("sampled chi is seeded and lands near the exact value") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 10; ++trial) {
    const auto d = t::random_binary(rng, {3, 4, 2}, 0.8);
    for (std::size_t i = 0; i < 3; ++i) {
      EstimatorConfig config{200000, 42, 0.95};
      const auto e = sample_chi(d, i, config);
      const auto again = sample_chi(d, i, config);
      CHECK(e.value == again.value);
      CHECK(e.samples_used == 200000);
      CHECK(std::abs(e.value - static_cast<double>(chi(d, i))) <= e.half_width);
      CHECK(e.half_width == doctest::Approx(hoeffding_half_width(
                                static_cast<double>(d.size()) * d.space().state_count(i),
                                200000, 0.95)));
    }
  }
}

TEST_CASE("sampled chi is unbiased in the mean over seeds") {
  const auto d = build_full_dataset(t::space_of({3, 3}), [](const Profile& p) {
    return Value::binary((p[0] + 2 * p[1]) % 3 == 0);
  });
  const double exact = static_cast<double>(chi(d, 0));
  const int seeds = 1000;
  double sum = 0, sum_sq = 0;
  for (int s = 0; s < seeds; ++s) {
    const double v = sample_chi(d, 0, {2000, static_cast<std::uint64_t>(s), 0.95}).value;
    sum += v;
    sum_sq += v * v;
  }
  const double mean = sum / seeds;
  const double var = (sum_sq - seeds * mean * mean) / (seeds - 1);
  CHECK(std::abs(mean - exact) < 3 * std::sqrt(var / seeds));
}

TEST_CASE("XOR: every substitution flips") {
  const auto x = build_full_dataset(t::space_of({2, 2}), [](const Profile& p) {
    return Value::binary(p[0] != p[1]);
  });
  double mean = 0;
  for (int s = 0; s < 100; ++s) {
    mean += sample_chi(x, 0, {10000, static_cast<std::uint64_t>(s), 0.95}).value / 100;
  }
  CHECK(std::abs(mean - 4.0) < 0.04);
}

TEST_CASE("dummy features and zero distances estimate exactly zero") {
  const auto d = build_full_dataset(t::space_of({3, 2}), [](const Profile& p) {
    return Value::binary(p[1] == 1);
  });
  const auto e = sample_chi(d, 0, {50000, 8, 0.95});
  CHECK(e.value == 0.0);
  CHECK(e.half_width == doctest::Approx(hoeffding_half_width(6.0 * 3, 50000, 0.95)));
  const auto zero = PseudoDistance::table(2, {0, 0, 0, 0});
  const auto cat = build_full_dataset(t::space_of({2, 2}), [](const Profile& p) {
    return Value::scalar(p[0]);
  });
  CHECK(sample_chi_distance(cat, zero, 0, {10000, 1, 0.95}).value == 0.0);
}

TEST_CASE("discrete distance sampling reproduces sample_chi") {
  std::mt19937_64 rng(19);
  const auto d = t::random_binary(rng, {4, 3}, 0.8);
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const EstimatorConfig config{30000, seed, 0.95};
    CHECK(sample_chi(d, 1, config).value ==
          sample_chi_distance(d, PseudoDistance::discrete(), 1, config).value);
  }
}

TEST_CASE("cosine-valued profiles: estimate within its half width") {
  // 12 profiles, each carrying a random nonnegative 6-vector.
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const auto d = build_full_dataset(t::space_of({2, 3, 2}), [&](const Profile&) {
    std::vector<double> v(6);
    for (auto& x : v) x = u(rng);
    return Value::vector(v);
  });
  for (std::size_t i = 0; i < 3; ++i) {
    const double exact = chi_distance(d, PseudoDistance::cosine(), i);
    int covered = 0;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
      const auto e = sample_chi_distance(d, PseudoDistance::cosine(), i, {20000, seed, 0.95});
      if (std::abs(e.value - exact) <= e.half_width) ++covered;
    }
    CHECK(covered >= 99);
  }
}

TEST_CASE("sampled distance influence") {
  const auto d = build_full_dataset(t::space_of({4, 2}), [](const Profile& p) {
    return Value::scalar(0.25 * p[0] + p[1]);
  });
  const double exact = chi_distance(d, PseudoDistance::absolute(), 0);
  const auto e = sample_chi_distance(d, PseudoDistance::absolute(), 0, {400000, 1, 0.95});
  CHECK(std::abs(e.value - exact) <= e.half_width);
  CHECK(e.value == sample_chi_distance(d, PseudoDistance::absolute(), 0, {400000, 1, 0.95}).value);
}

TEST_CASE("estimator arguments are validated") {
  const auto d = build_full_dataset(t::space_of({2}), [](const Profile& p) {
    return Value::binary(p[0] == 1);
  });
  CHECK_THROWS_AS(sample_chi(d, 0, {0, 0, 0.95}), InfluenceError);
  CHECK_THROWS_AS(sample_chi(d, 0, {10, 0, 1.0}), InfluenceError);
  CHECK_THROWS_AS(sample_chi(d, 3, {10, 0, 0.95}), InfluenceError);
  // A one-sample run still reports a finite estimate.
  CHECK(std::isfinite(sample_chi(d, 0, {1, 0, 0.95}).value));
}
