#ifndef INFLUENCE_TESTS_TEST_UTIL_H_
#define INFLUENCE_TESTS_TEST_UTIL_H_

#include <cmath>
#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "influence/core.h"

namespace influence::testing {

// Labels are plain strings so the oracles never touch the library's keys.
inline FeatureSpace space_of(const std::vector<std::size_t>& sizes) {
  std::vector<Feature> spec;
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    Feature f{"f" + std::to_string(i + 1), {}};
    for (std::size_t s = 0; s < sizes[i]; ++s) f.states.push_back("s" + std::to_string(s));
    spec.push_back(std::move(f));
  }
  return build_space(std::move(spec));
}

inline std::vector<Profile> all_profiles(const FeatureSpace& space) {
  std::vector<Profile> out;
  Profile p;
  p.states.assign(space.feature_count(), 0);
  if (space.feature_count() == 0) return out;
  for (;;) {
    out.push_back(p);
    std::size_t k = 0;
    while (k < p.states.size()) {
      if (++p.states[k] < space.state_count(k)) break;
      p.states[k] = 0;
      ++k;
    }
    if (k == p.states.size()) return out;
  }
}

// Observed profiles and their values as a plain map.
using Table = std::map<std::vector<StateIndex>, std::vector<double>>;

inline Table table_of(const LabeledDataset& d) {
  Table t;
  for (std::size_t p = 0; p < d.size(); ++p) {
    auto v = d.value(p);
    t[d.profile(p).states] = std::vector<double>(v.begin(), v.end());
  }
  return t;
}

// Direct double sum over a in B and b in A_i, b != a_i, (a_-i, b) in B.
template <typename Dist>
double brute_force_total(const FeatureSpace& space, const Table& t, std::size_t i,
                         Dist dist) {
  double total = 0;
  for (const auto& [a, va] : t) {
    for (StateIndex b = 0; b < space.state_count(i); ++b) {
      if (b == a[i]) continue;
      auto sub = a;
      sub[i] = b;
      auto it = t.find(sub);
      if (it == t.end()) continue;
      total += dist(it->second, va);
    }
  }
  return total;
}

inline double brute_force_chi(const LabeledDataset& d, std::size_t i) {
  return brute_force_total(d.space(), table_of(d), i,
                           [](const std::vector<double>& x, const std::vector<double>& y) {
                             return std::abs(x[0] - y[0]);
                           });
}

// Random binary dataset; each profile observed with probability `density`
// (at least one is always kept).
inline LabeledDataset random_binary(std::mt19937_64& rng,
                                    const std::vector<std::size_t>& sizes,
                                    double density) {
  FeatureSpace space = space_of(sizes);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<Record> records;
  for (const auto& p : all_profiles(space)) {
    if (u(rng) >= density) continue;
    records.push_back({p, Value::binary(u(rng) < 0.5)});
  }
  if (records.empty()) records.push_back({all_profiles(space).front(), Value::binary(true)});
  return build_dataset(std::move(space), std::move(records));
}

inline std::vector<std::size_t> random_sizes(std::mt19937_64& rng, std::uint64_t max_profiles) {
  std::uniform_int_distribution<std::size_t> nf(1, 4), ns(1, 5);
  for (;;) {
    std::vector<std::size_t> sizes(nf(rng));
    std::uint64_t prod = 1;
    for (auto& s : sizes) {
      s = ns(rng);
      prod *= s;
    }
    if (prod <= max_profiles) return sizes;
  }
}

}  // namespace influence::testing

#endif  // INFLUENCE_TESTS_TEST_UTIL_H_
