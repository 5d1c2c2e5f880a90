#pragma once

#include <cstdint>

namespace levs {

/// Counter-based pseudo-random stream (splitmix64 finalizer). Every draw is a
/// pure function of (seed, counter), so parallel consumers indexed by element
/// id produce schedule-independent results.
struct CounterRng {
  uint64_t seed = 0;

  static uint64_t mix(uint64_t z) {
    z += 0x9e3779b97f4a7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  uint64_t bits(uint64_t counter) const { return mix(mix(seed) ^ mix(counter + 1)); }

  /// Uniform in [0, 1).
  double uniform(uint64_t counter) const {
    return static_cast<double>(bits(counter) >> 11) * 0x1.0p-53;
  }
};

/// Sequential fair-coin stream over a CounterRng; draws +1 or -1.
struct SignStream {
  CounterRng rng;
  uint64_t counter = 0;

  explicit SignStream(uint64_t seed) : rng{seed} {}
  int next() { return (rng.bits(counter++) & 1u) ? 1 : -1; }
};

}  // namespace levs
