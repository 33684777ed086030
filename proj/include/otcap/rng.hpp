#ifndef OTCAP_RNG_HPP
#define OTCAP_RNG_HPP

#include <cstdint>

namespace otcap {

/// Deterministic 64-bit generator (splitmix64 update). Small state, cheap to
/// fork: derive(seed, stream) gives independent-looking streams for the same
/// base seed, which is how per-trial randomness is produced everywhere.
class Prng {
 public:
  explicit Prng(std::uint64_t seed) : state_(seed) {}

  /// The raw update walks one global +gamma orbit, so derived streams must
  /// start at avalanche-hashed positions; seeding with a linear combination
  /// of (seed, stream) would make nearby streams time-shifted copies.
  static Prng derive(std::uint64_t seed, std::uint64_t stream) {
    Prng mix(mix64(seed ^ (0x9e3779b97f4a7c15ULL * (stream + 1))));
    mix.next_u64();
    mix.next_u64();
    return mix;
  }

  std::uint64_t next_u64() {
    state_ += 0x9e3779b97f4a7c15ULL;
    return mix64(state_);
  }

  /// Uniform double in [0, 1) with 53 random bits.
  double next_double() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  int next_bit() { return static_cast<int>(next_u64() >> 63); }

  /// Uniform integer in [0, bound), bound >= 1, by rejection.
  std::uint64_t next_below(std::uint64_t bound) {
    const std::uint64_t limit = bound * (UINT64_MAX / bound);
    std::uint64_t v;
    do {
      v = next_u64();
    } while (v >= limit);
    return v % bound;
  }

 private:
  static std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  std::uint64_t state_;
};

}  // namespace otcap

#endif
