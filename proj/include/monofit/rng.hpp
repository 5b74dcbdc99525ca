#pragma once

#include <cstdint>

namespace monofit {

namespace detail {

// splitmix64 step (Vigna, public domain): advances state by the golden
// gamma and returns a finalized word.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// Stateless avalanche of a single word (the splitmix64 finalizer).
inline std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

inline std::uint64_t rotl64(std::uint64_t x, int k) {
  return (x << k) | (x >> (64 - k));
}

}  // namespace detail

// xoshiro256** (Vigna/Blackman, public domain) seeded through splitmix64.
// Substreams for replicate-parallel simulation are derived by hashing
// (master_seed, stream_index), so replicate r sees the same draws no
// matter how work is scheduled across threads.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) {
    std::uint64_t s = seed;
    for (auto& word : state_) word = detail::splitmix64(s);
  }

  static Rng substream(std::uint64_t master_seed, std::uint64_t index) {
    const std::uint64_t a = detail::mix64(master_seed + 0x9E3779B97F4A7C15ULL);
    const std::uint64_t b = detail::mix64(index * 0xBF58476D1CE4E5B9ULL + 0x94D049BB133111EBULL);
    return Rng(a ^ b);
  }

  std::uint64_t next_u64() {
    const std::uint64_t result = detail::rotl64(state_[1] * 5, 7) * 9;
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = detail::rotl64(state_[3], 45);
    return result;
  }

  // Uniform on [0,1) with 53 random bits.
  double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

 private:
  std::uint64_t state_[4];
};

}  // namespace monofit
