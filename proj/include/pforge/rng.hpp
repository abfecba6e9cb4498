// SplitMix64: the 64-bit generator used wherever this project needs seeded
// randomness (fuzz environments, test constants, random expressions). The
// constants below are part of the output contract: golden files depend on
// them, so they must not change.

#pragma once

#include <cstdint>

namespace pforge {

class SplitMix64 {
 public:
  static constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ULL;
  static constexpr std::uint64_t kMul1 = 0xBF58476D1CE4E5B9ULL;
  static constexpr std::uint64_t kMul2 = 0x94D049BB133111EBULL;

  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += kGamma);
    z = (z ^ (z >> 30)) * kMul1;
    z = (z ^ (z >> 27)) * kMul2;
    return z ^ (z >> 31);
  }

  // Uniform in [0, bound) for bound > 0 (rejection-free modulo; the bias is
  // irrelevant for the small bounds used here).
  std::uint64_t below(std::uint64_t bound) { return next() % bound; }

  // Independent stream derived from (seed, index).
  static SplitMix64 stream(std::uint64_t seed, std::uint64_t index) {
    SplitMix64 mixer(seed ^ (index * kGamma));
    return SplitMix64(mixer.next());
  }

 private:
  std::uint64_t state_;
};

}  // namespace pforge
