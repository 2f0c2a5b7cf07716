#pragma once

// Deterministic randomness. Everything flows from one user-facing 64-bit seed;
// independent sub-streams are derived with mix_seed(seed, tag) where the tag
// identifies the task (attempt index, stratum size, pipeline stage). The
// generator is splitmix64 and all derived draws use rejection sampling, so
// results are identical across platforms and worker counts.

#include <cstdint>
#include <vector>

namespace spread {

struct SplitMix64 {
  std::uint64_t state;

  explicit SplitMix64(std::uint64_t seed) : state(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }
};

// Sub-seed rule (documented for reproducibility): the splitmix64 output mix
// applied to seed + (tag + 1) * 0x9e3779b97f4a7c15.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t tag) {
  std::uint64_t z = seed + (tag + 1) * 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Exact uniform draw from [0, m), m >= 1; rejects the top remainder band.
inline std::uint64_t uniform_below(SplitMix64& g, std::uint64_t m) {
  std::uint64_t t = (0 - m) % m; // 2^64 mod m
  std::uint64_t r = g.next();
  while (r < t) r = g.next();
  return r % m;
}

// True with probability exactly 2^-t.
inline bool bernoulli_dyadic(SplitMix64& g, std::uint64_t t) {
  while (t >= 64) {
    if (g.next() != 0) return false;
    t -= 64;
  }
  if (t == 0) return true;
  return (g.next() >> (64 - t)) == 0;
}

// Uniform size-subset of {0, ..., universe-1} (Floyd), returned sorted.
std::vector<std::uint32_t> random_subset(SplitMix64& g, std::uint32_t universe,
                                         std::uint32_t size);

} // namespace spread
