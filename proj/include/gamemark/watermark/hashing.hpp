#pragma once

#include <cstdint>
#include <string_view>

// The keyed-hash and generator primitives behind the partition recipe.
// The exact byte-level behaviour here is normative: it is published in
// PARTITION-FORMAT.md so third parties can re-derive green/red lists.

namespace gamemark::wm {

inline constexpr std::uint64_t kFnvOffsetBasis = 0xcbf29ce484222325ULL;
inline constexpr std::uint64_t kFnvPrime = 0x100000001b3ULL;

// Separator byte between key and observation in seed derivation.
inline constexpr unsigned char kSeedSeparator = 0x1F;

constexpr std::uint64_t fnv1a64(std::string_view data,
                                std::uint64_t h = kFnvOffsetBasis) {
  for (unsigned char byte : data) {
    h ^= byte;
    h *= kFnvPrime;
  }
  return h;
}

// seed = FNV-1a-64 over (key || 0x1F || observation). An empty key degrades
// to FNV-1a-64 over (0x1F || observation): the public-watermark mode.
std::uint64_t seed_from_observation(std::string_view obs, std::string_view key);

// SplitMix64. Created per call site, used, and discarded; never shared.
class SplitMix64 {
 public:
  explicit constexpr SplitMix64(std::uint64_t seed) : state_(seed) {}

  constexpr std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  // Uniform draw in [0, bound) by rejection; no modulo bias.
  constexpr std::uint64_t next_bounded(std::uint64_t bound) {
    const std::uint64_t threshold = (0ULL - bound) % bound;
    for (;;) {
      const std::uint64_t r = next();
      if (r >= threshold) return r % bound;
    }
  }

  // Uniform double in [0, 1) using the top 53 bits.
  constexpr double next_unit() { return double(next() >> 11) * 0x1.0p-53; }

 private:
  std::uint64_t state_;
};

}  // namespace gamemark::wm
