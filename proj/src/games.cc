#include "influence/games.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <sstream>

#include "influence/error.h"
#include "influence/measures.h"
#include "influence/rng.h"

namespace influence {
namespace {

void require_player(const TUGame& game, std::size_t player) {
  if (player >= game.players()) {
    throw InfluenceError(ErrorCode::kInvalidArgument,
                         "player " + std::to_string(player) + " out of range");
  }
}

// ---- random instance generation for the axiom checkers ----

FeatureSpace random_space(BlockRng& rng, std::uint64_t max_profiles) {
  for (;;) {
    const std::size_t n = 1 + rng.below(4);
    std::vector<Feature> features;
    std::uint64_t total = 1;
    for (std::size_t k = 0; k < n; ++k) {
      const std::size_t states = 1 + rng.below(4);
      total *= states;
      Feature f{"f" + std::to_string(k), {}};
      for (std::size_t s = 0; s < states; ++s) f.states.push_back("s" + std::to_string(s));
      features.push_back(std::move(f));
    }
    if (total <= max_profiles) return build_space(std::move(features));
  }
}

std::vector<ProfileKey> random_observed_set(BlockRng& rng,
                                            const FeatureSpace& space) {
  const std::uint64_t total = space.profile_count();
  std::vector<ProfileKey> keys;
  if (rng.below(2) == 0) {
    keys.resize(total);
    std::iota(keys.begin(), keys.end(), ProfileKey{0});
    return keys;
  }
  const double keep = 0.3 + 0.7 * rng.uniform01();
  for (ProfileKey k = 0; k < total; ++k) {
    if (rng.uniform01() < keep) keys.push_back(k);
  }
  if (keys.empty()) keys.push_back(rng.below(total));
  return keys;
}

LabeledDataset binary_dataset(const FeatureSpace& space,
                              std::vector<ProfileKey> keys,
                              const std::vector<bool>& wins) {
  std::vector<double> values(keys.size());
  for (std::size_t p = 0; p < keys.size(); ++p) values[p] = wins[p] ? 1.0 : 0.0;
  return make_dataset_from_sorted(space, ValueKind::kBinary, 1, std::move(keys),
                                  std::move(values));
}

LabeledDataset random_binary_dataset(BlockRng& rng, const FeatureSpace& space) {
  auto keys = random_observed_set(rng, space);
  const double bias = rng.uniform01();
  std::vector<bool> wins(keys.size());
  for (std::size_t p = 0; p < keys.size(); ++p) wins[p] = rng.uniform01() < bias;
  return binary_dataset(space, std::move(keys), wins);
}

std::string describe(const LabeledDataset& d) {
  std::ostringstream out;
  out << "space ";
  for (std::size_t k = 0; k < d.space().feature_count(); ++k) {
    out << (k ? "x" : "") << d.space().state_count(k);
  }
  out << ", |B|=" << d.size() << ", values {";
  for (std::size_t p = 0; p < d.size(); ++p) {
    out << (p ? " " : "") << d.key(p) << ":" << d.value(p)[0];
  }
  out << "}";
  return out.str();
}

template <typename Trial>
AxiomVerdict run_trials(const std::string& axiom, std::uint64_t tag,
                        const AxiomCheckOptions& options, Trial trial) {
  AxiomVerdict verdict;
  verdict.axiom = axiom;
  for (std::size_t t = 0; t < options.trials; ++t) {
    BlockRng rng(derive_seed(options.seed, tag, t));
    ++verdict.trials;
    if (auto failure = trial(rng)) {
      ++verdict.failures;
      if (!verdict.witness) {
        verdict.witness = "trial " + std::to_string(t) + ": " + *failure;
      }
    }
  }
  return verdict;
}

std::string mismatch(const char* lhs_name, double lhs, const char* rhs_name,
                     double rhs) {
  std::ostringstream out;
  out.precision(17);
  out << lhs_name << "=" << lhs << " but " << rhs_name << "=" << rhs;
  return out.str();
}

}  // namespace

TUGame::TUGame(std::size_t players, std::vector<double> values)
    : players_(players), values_(std::move(values)) {
  if (players > kMaxExactPlayers) {
    throw InfluenceError(ErrorCode::kCapExceeded,
                         "exact games support at most 20 players");
  }
  if (values_.size() != (std::size_t{1} << players)) {
    throw InfluenceError(ErrorCode::kInvalidArgument,
                         "characteristic function needs 2^n values");
  }
}

bool TUGame::is_binary() const {
  return std::all_of(values_.begin(), values_.end(),
                     [](double x) { return x == 0.0 || x == 1.0; });
}

TUGame TUGame::from_function(std::size_t players,
                             const std::function<double(Coalition)>& v) {
  if (players > kMaxExactPlayers) {
    throw InfluenceError(ErrorCode::kCapExceeded,
                         "exact games support at most 20 players");
  }
  std::vector<double> values(std::size_t{1} << players);
  for (Coalition s = 0; s < values.size(); ++s) values[s] = v(s);
  return TUGame(players, std::move(values));
}

TUGame TUGame::majority(std::size_t players) {
  return from_function(players, [players](Coalition s) {
    return 2 * static_cast<std::size_t>(std::popcount(s)) > players ? 1.0 : 0.0;
  });
}

TUGame TUGame::unanimity(std::size_t players) {
  const Coalition all = (Coalition{1} << players) - 1;
  return from_function(players, [all](Coalition s) { return s == all ? 1.0 : 0.0; });
}

TUGame TUGame::dictator(std::size_t players, std::size_t dictator) {
  return from_function(players, [dictator](Coalition s) {
    return (s >> dictator) & 1U ? 1.0 : 0.0;
  });
}

TUGame TUGame::additive(const std::vector<double>& contributions) {
  return from_function(contributions.size(), [&](Coalition s) {
    double total = 0.0;
    for (std::size_t k = 0; k < contributions.size(); ++k) {
      if ((s >> k) & 1U) total += contributions[k];
    }
    return total;
  });
}

double marginal(const TUGame& game, std::size_t player, Coalition coalition) {
  require_player(game, player);
  const Coalition bit = Coalition{1} << player;
  if (coalition & bit) return 0.0;
  return game.value(coalition | bit) - game.value(coalition);
}

double banzhaf(const TUGame& game, std::size_t player, bool raw) {
  require_player(game, player);
  KahanSum total;
  const Coalition count = Coalition{1} << game.players();
  for (Coalition s = 0; s < count; ++s) total.add(marginal(game, player, s));
  return raw ? total.value() : total.value() / static_cast<double>(count);
}

std::uint64_t swing_count(const TUGame& game, std::size_t player) {
  require_player(game, player);
  std::uint64_t swings = 0;
  const Coalition count = Coalition{1} << game.players();
  const Coalition bit = Coalition{1} << player;
  for (Coalition s = 0; s < count; ++s) {
    if (!(s & bit) && game.value(s | bit) != game.value(s)) ++swings;
  }
  return swings;
}

double shapley(const TUGame& game, std::size_t player) {
  require_player(game, player);
  if (game.players() > kMaxShapleyPlayers) {
    throw InfluenceError(ErrorCode::kCapExceeded,
                         "Shapley enumeration supports at most 10 players");
  }
  std::vector<std::size_t> order(game.players());
  std::iota(order.begin(), order.end(), std::size_t{0});
  KahanSum total;
  std::uint64_t permutations = 0;
  do {
    Coalition predecessors = 0;
    for (std::size_t k : order) {
      if (k == player) break;
      predecessors |= Coalition{1} << k;
    }
    total.add(marginal(game, player, predecessors));
    ++permutations;
  } while (std::next_permutation(order.begin(), order.end()));
  return total.value() / static_cast<double>(permutations);
}

LabeledDataset game_to_dataset(const TUGame& game) {
  std::vector<Feature> features;
  for (std::size_t k = 0; k < game.players(); ++k) {
    features.push_back({"p" + std::to_string(k + 1), {"0", "1"}});
  }
  const bool binary = game.is_binary();
  return build_full_dataset(build_space(std::move(features)),
                            [&](const Profile& p) {
                              Coalition s = 0;
                              for (std::size_t k = 0; k < p.size(); ++k) {
                                if (p[k] == 1) s |= Coalition{1} << k;
                              }
                              return binary ? Value::binary(game.value(s) == 1.0)
                                            : Value::scalar(game.value(s));
                            });
}

TUGame dataset_to_game(const LabeledDataset& dataset) {
  const auto& space = dataset.space();
  if (!dataset.is_full() || dataset.kind() == ValueKind::kVector) {
    throw InfluenceError(ErrorCode::kInvalidArgument,
                         "only full binary or scalar datasets map to games");
  }
  for (std::size_t k = 0; k < space.feature_count(); ++k) {
    if (space.state_count(k) != 2) {
      throw InfluenceError(ErrorCode::kInvalidArgument,
                           "every feature needs exactly two states");
    }
  }
  return TUGame::from_function(space.feature_count(), [&](Coalition s) {
    Profile p;
    for (std::size_t k = 0; k < space.feature_count(); ++k) {
      p.states.push_back((s >> k) & 1U);
    }
    return dataset.value(*dataset.find(encode(space, p)))[0];
  });
}

bool measures_agree(double a, double b) {
  if (a == std::floor(a) && b == std::floor(b)) return a == b;
  const double scale = std::max({std::abs(a), std::abs(b), 1e-300});
  return std::abs(a - b) <= 1e-9 * scale;
}

AxiomVerdict check_axiom_dummy(const MeasureUnderTest& measure,
                               const AxiomCheckOptions& options) {
  return run_trials("dummy", 1, options,
                    [&](BlockRng& rng) -> std::optional<std::string> {
    const FeatureSpace space = random_space(rng, options.max_profiles);
    const std::size_t feature = rng.below(space.feature_count());
    auto keys = random_observed_set(rng, space);
    // Value depends on a_-i only.
    const std::uint64_t salt = rng.next();
    std::vector<bool> wins(keys.size());
    for (std::size_t p = 0; p < keys.size(); ++p) {
      wins[p] = mix64(space.context_key(keys[p], feature) ^ salt) & 1U;
    }
    const LabeledDataset d = binary_dataset(space, std::move(keys), wins);
    const double value = measure(d, feature);
    if (measures_agree(value, 0.0)) return std::nullopt;
    return "feature " + std::to_string(feature) + " is a dummy but " +
           mismatch("phi", value, "expected", 0.0) + " on " + describe(d);
  });
}

std::vector<AxiomVerdict> check_axiom_symmetry(const MeasureUnderTest& measure,
                                               const AxiomCheckOptions& options) {
  std::vector<AxiomVerdict> out;
  out.push_back(run_trials("state-symmetry", 2, options,
                           [&](BlockRng& rng) -> std::optional<std::string> {
    const FeatureSpace space = random_space(rng, options.max_profiles);
    const LabeledDataset d = random_binary_dataset(rng, space);
    const std::size_t feature = rng.below(space.feature_count());
    std::vector<StateIndex> tau(space.state_count(feature));
    std::iota(tau.begin(), tau.end(), StateIndex{0});
    for (std::size_t k = tau.size(); k > 1; --k) std::swap(tau[k - 1], tau[rng.below(k)]);
    const LabeledDataset relabeled = permute_feature_states(d, feature, tau);
    for (std::size_t j = 0; j < space.feature_count(); ++j) {
      const double before = measure(d, j);
      const double after = measure(relabeled, j);
      if (!measures_agree(before, after)) {
        return "relabeling states of feature " + std::to_string(feature) +
               " changed feature " + std::to_string(j) + ": " +
               mismatch("phi(G)", before, "phi(tauG)", after) + " on " + describe(d);
      }
    }
    return std::nullopt;
  }));
  out.push_back(run_trials("feature-symmetry", 3, options,
                           [&](BlockRng& rng) -> std::optional<std::string> {
    const FeatureSpace space = random_space(rng, options.max_profiles);
    const LabeledDataset d = random_binary_dataset(rng, space);
    std::vector<std::size_t> sigma(space.feature_count());
    std::iota(sigma.begin(), sigma.end(), std::size_t{0});
    for (std::size_t k = sigma.size(); k > 1; --k) std::swap(sigma[k - 1], sigma[rng.below(k)]);
    const LabeledDataset moved = permute_features(d, sigma);
    for (std::size_t i = 0; i < space.feature_count(); ++i) {
      const double before = measure(d, i);
      const double after = measure(moved, sigma[i]);
      if (!measures_agree(before, after)) {
        return "feature " + std::to_string(i) + " moved to " +
               std::to_string(sigma[i]) + ": " +
               mismatch("phi(G)", before, "phi(sigmaG)", after) + " on " +
               describe(d);
      }
    }
    return std::nullopt;
  }));
  return out;
}

AxiomVerdict check_axiom_disjoint_union(const MeasureUnderTest& measure,
                                        const AxiomCheckOptions& options) {
  return run_trials("disjoint-union", 4, options,
                    [&](BlockRng& rng) -> std::optional<std::string> {
    const FeatureSpace space = random_space(rng, options.max_profiles);
    const std::uint64_t total = space.profile_count();
    // 0: Q, 1: R, 2: R', 3: unobserved.
    std::vector<int> role(total);
    for (auto& r : role) r = static_cast<int>(rng.below(4));
    role[rng.below(total)] = 0;
    const bool q_wins = rng.below(2) == 0;

    auto make = [&](bool with_r, bool with_r_prime) {
      std::vector<ProfileKey> keys;
      std::vector<bool> wins;
      for (ProfileKey k = 0; k < total; ++k) {
        const int r = role[k];
        if (r == 0 || (r == 1 && with_r) || (r == 2 && with_r_prime)) {
          keys.push_back(k);
          wins.push_back((r == 0) == q_wins);
        }
      }
      return binary_dataset(space, std::move(keys), wins);
    };
    const LabeledDataset qr = make(true, false);
    const LabeledDataset qr_prime = make(false, true);
    const LabeledDataset q_union = make(true, true);
    for (std::size_t i = 0; i < space.feature_count(); ++i) {
      const double lhs = measure(qr, i) + measure(qr_prime, i);
      const double rhs = measure(q_union, i);
      if (!measures_agree(lhs, rhs)) {
        return std::string(q_wins ? "Q winning" : "Q losing") + ", feature " +
               std::to_string(i) + ": " +
               mismatch("phi(Q,R)+phi(Q,R')", lhs, "phi(Q,R+R')", rhs) +
               " on " + describe(q_union);
      }
    }
    return std::nullopt;
  });
}

AxiomVerdict check_axiom_additivity(const MeasureUnderTest& measure,
                                    const AxiomCheckOptions& options) {
  return run_trials("additivity", 5, options,
                    [&](BlockRng& rng) -> std::optional<std::string> {
    const FeatureSpace space = random_space(rng, options.max_profiles);
    const auto keys = random_observed_set(rng, space);
    // 0: wins in G1, 1: wins in G2, 2: loses in both.
    std::vector<bool> win1(keys.size()), win2(keys.size()), sum(keys.size());
    for (std::size_t p = 0; p < keys.size(); ++p) {
      const auto r = rng.below(3);
      win1[p] = r == 0;
      win2[p] = r == 1;
      sum[p] = r != 2;
    }
    const LabeledDataset g1 = binary_dataset(space, keys, win1);
    const LabeledDataset g2 = binary_dataset(space, keys, win2);
    const LabeledDataset g12 = binary_dataset(space, keys, sum);
    for (std::size_t i = 0; i < space.feature_count(); ++i) {
      const double lhs = measure(g1, i) + measure(g2, i);
      const double rhs = measure(g12, i);
      if (!measures_agree(lhs, rhs)) {
        return "feature " + std::to_string(i) + ": " +
               mismatch("phi(G1)+phi(G2)", lhs, "phi(G1+G2)", rhs) + "; G1 " +
               describe(g1) + "; G2 " + describe(g2);
      }
    }
    return std::nullopt;
  });
}

std::vector<AxiomVerdict> check_all_axioms(const MeasureUnderTest& measure,
                                           const AxiomCheckOptions& options) {
  std::vector<AxiomVerdict> out;
  out.push_back(check_axiom_dummy(measure, options));
  for (auto& v : check_axiom_symmetry(measure, options)) out.push_back(std::move(v));
  out.push_back(check_axiom_disjoint_union(measure, options));
  out.push_back(check_axiom_additivity(measure, options));
  return out;
}

}  // namespace influence
