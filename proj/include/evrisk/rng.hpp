#pragma once

#include <cstdint>

namespace evrisk {

// splitmix64 finalizer.
inline std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Counter-based generator (splitmix64). Cheap to construct, so every
// replicate gets its own stream derived from (seed, index); results are
// then independent of execution order and of the number of worker threads.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    state_ += 0x9e3779b97f4a7c15ULL;
    return mix64(state_);
  }

  // Uniform on the open interval (0,1), values (k + 1/2) / 2^52.
  // The complement 1-u lies on the same grid, so antithetic pairing
  // with 1-u is exact in floating point.
  double uniform_open() {
    return (static_cast<double>(next_u64() >> 12) + 0.5) * 0x1p-52;
  }

 private:
  std::uint64_t state_;
};

// Seed of substream `index` of `seed`.
inline std::uint64_t substream(std::uint64_t seed, std::uint64_t index) {
  return mix64(seed ^ (0x9e3779b97f4a7c15ULL + mix64(index + 0x2545f4914f6cdd1dULL)));
}

inline std::uint64_t substream(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
  return substream(substream(seed, a), b);
}

}  // namespace evrisk
