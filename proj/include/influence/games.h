#ifndef INFLUENCE_GAMES_H_
#define INFLUENCE_GAMES_H_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "influence/core.h"

namespace influence {

using Coalition = std::uint32_t;  // bitmask, player k <-> bit k

inline constexpr std::size_t kMaxExactPlayers = 20;
inline constexpr std::size_t kMaxShapleyPlayers = 10;

// Transferable-utility game with a dense characteristic function over all
// 2^n coalitions. v(empty) need not be zero.
class TUGame {
 public:
  // Throws kCapExceeded for n > kMaxExactPlayers and kInvalidArgument when
  // values.size() != 2^n.
  TUGame(std::size_t players, std::vector<double> values);

  std::size_t players() const { return players_; }
  double value(Coalition s) const { return values_.at(s); }
  const std::vector<double>& values() const { return values_; }
  bool is_binary() const;

  static TUGame from_function(std::size_t players,
                              const std::function<double(Coalition)>& v);
  // Winning iff more than half of the players join.
  static TUGame majority(std::size_t players);
  // Winning iff every player joins.
  static TUGame unanimity(std::size_t players);
  // Winning iff the dictator joins.
  static TUGame dictator(std::size_t players, std::size_t dictator);
  // v(S) = sum of the members' contributions.
  static TUGame additive(const std::vector<double>& contributions);

 private:
  std::size_t players_;
  std::vector<double> values_;
};

// v(S + i) - v(S); zero when i is already in S.
double marginal(const TUGame& game, std::size_t player, Coalition coalition);

// Sum over all S of m_i(S); the normalized index divides by 2^n.
double banzhaf(const TUGame& game, std::size_t player, bool raw);

// Number of coalitions S not containing i with v(S + i) != v(S).
std::uint64_t swing_count(const TUGame& game, std::size_t player);

// Average predecessor marginal over all n! orderings (n <= 10).
double shapley(const TUGame& game, std::size_t player);

// Players become two-state features "p1".."pn" with states "0","1".
// Binary characteristic functions yield binary datasets, others scalar.
LabeledDataset game_to_dataset(const TUGame& game);

// Inverse of game_to_dataset for full datasets whose features all have two
// states; state index 1 means "in the coalition".
TUGame dataset_to_game(const LabeledDataset& dataset);

// ---- Axiom checkers ----

using MeasureUnderTest =
    std::function<double(const LabeledDataset& dataset, std::size_t feature)>;

struct AxiomVerdict {
  std::string axiom;
  std::size_t trials = 0;
  std::size_t failures = 0;
  bool passed() const { return failures == 0; }
  // First failing instance, human readable.
  std::optional<std::string> witness;
};

struct AxiomCheckOptions {
  std::size_t trials = 500;
  std::uint64_t seed = 0;
  // Spaces drawn by the generators have at most this many profiles.
  std::uint64_t max_profiles = 64;
};

// Values agree exactly when both are integers, otherwise within 1e-9
// relative.
bool measures_agree(double a, double b);

AxiomVerdict check_axiom_dummy(const MeasureUnderTest& measure,
                               const AxiomCheckOptions& options);
// Two verdicts: state symmetry, then feature symmetry.
std::vector<AxiomVerdict> check_axiom_symmetry(const MeasureUnderTest& measure,
                                               const AxiomCheckOptions& options);
AxiomVerdict check_axiom_disjoint_union(const MeasureUnderTest& measure,
                                        const AxiomCheckOptions& options);
// Sums of binary datasets with disjoint winning sets over a shared B.
AxiomVerdict check_axiom_additivity(const MeasureUnderTest& measure,
                                    const AxiomCheckOptions& options);

std::vector<AxiomVerdict> check_all_axioms(const MeasureUnderTest& measure,
                                           const AxiomCheckOptions& options);

}  // namespace influence

#endif  // INFLUENCE_GAMES_H_
