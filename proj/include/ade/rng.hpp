/* Counter-based deterministic random number generator (SplitMix64 core). */
#pragma once

#include <cstdint>

namespace ade {

/// SplitMix64 mix of a 64-bit word; stateless, so streams are reproducible
/// from (seed, counter) pairs alone.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Deterministic counter-based RNG: draw i of stream `seed` is
/// splitmix64(seed + golden * i), independent of call history.
class CounterRng {
  public:
    explicit CounterRng(std::uint64_t seed, std::uint64_t counter = 0)
        : seed_(seed), counter_(counter) {}

    std::uint64_t next_u64() { return splitmix64(seed_ ^ (counter_++ * 0x9e3779b97f4a7c15ULL)); }

    /// Uniform in [0, bound) by rejection (bound > 0).
    std::uint64_t next_below(std::uint64_t bound) {
        std::uint64_t limit = bound * (UINT64_MAX / bound);
        std::uint64_t x;
        do {
            x = next_u64();
        } while (x >= limit);
        return x % bound;
    }

    /// Uniform signed integer in [-range, range].
    std::int64_t next_signed(std::int64_t range) {
        return static_cast<std::int64_t>(next_below(2 * static_cast<std::uint64_t>(range) + 1)) -
               range;
    }

    /// Uniform double in [0, 1).
    double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    std::uint64_t seed() const { return seed_; }
    std::uint64_t counter() const { return counter_; }

  private:
    std::uint64_t seed_;
    std::uint64_t counter_;
};

}  // namespace ade
