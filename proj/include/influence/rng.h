#ifndef INFLUENCE_RNG_H_
#define INFLUENCE_RNG_H_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <random>

namespace influence {

// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Sub-seed for one sampling block. Stable across releases: streams are
// mt19937_64 (fully specified by the standard) seeded with
// mix64(mix64(mix64(seed) ^ stream) ^ block).
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream,
                                    std::uint64_t block) {
  return mix64(mix64(mix64(seed) ^ stream) ^ block);
}

// Uniform draws with a fixed bit-level recipe; std distributions are
// implementation-defined and would break cross-platform reproducibility.
class BlockRng {
 public:
  explicit BlockRng(std::uint64_t seed) : engine_(seed) {}

  // 53 random bits scaled into [0, 1).
  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  // Uniform integer in [0, n), n > 0, by rejection.
  std::uint64_t below(std::uint64_t n) {
    const std::uint64_t limit = -n % n;  // 2^64 mod n
    for (;;) {
      const std::uint64_t x = engine_();
      if (x >= limit) return x % n;
    }
  }

  std::uint64_t next() { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

inline constexpr std::size_t kSampleBlockSize = 1 << 14;

// Runs body(block) for every block in [0, blocks). Uses worker threads when
// the machine has them; callers combine per-block results in block order so
// output never depends on the schedule.
void for_each_block(std::size_t blocks,
                    const std::function<void(std::size_t)>& body);

}  // namespace influence

#endif  // INFLUENCE_RNG_H_
