#ifndef MAP2FIT_RANDOM_HPP
#define MAP2FIT_RANDOM_HPP

// Reproducible random streams. Every randomized routine takes a master seed
// and derives its own generator from (seed, purpose, index) through
// SplitMix64 mixing, so results do not depend on call order or threading.
// Variates are produced from raw 64-bit engine output by fixed formulas
// (no <random> distributions, whose algorithms vary between standard
// libraries), which keeps samples bit-identical across toolchains.

#include <cstdint>
#include <random>

namespace map2fit {

enum class Stream : std::uint64_t {
  Simulation = 1,
  RandomModel = 2,
  Multistart = 3,
  Divergence = 4,
  Scan = 5,
  Compare = 6,
};

std::uint64_t splitmix64(std::uint64_t x);

std::uint64_t derive_seed(std::uint64_t master, Stream purpose,
                          std::uint64_t index = 0);

class Rng {
public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  Rng(std::uint64_t master, Stream purpose, std::uint64_t index = 0)
      : engine_(derive_seed(master, purpose, index)) {}

  std::uint64_t bits() { return engine_(); }
  // [0, 1) on the 2^-53 grid.
  double uniform() { return static_cast<double>(bits() >> 11) * 0x1.0p-53; }
  // (0, 1), never exactly 0 or 1.
  double uniform_open() {
    return (static_cast<double>(bits() >> 11) + 0.5) * 0x1.0p-53;
  }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  double log_uniform(double lo, double hi);
  double exponential(double rate);

private:
  std::mt19937_64 engine_;
};

} // namespace map2fit

#endif
