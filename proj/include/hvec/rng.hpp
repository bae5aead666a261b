#pragma once

#include <cstdint>

namespace hvec {

// Counter-based deterministic stream (splitmix64). Each (seed, stream) pair
// is an independent sequence, so per-shot streams keyed by shot index give
// results independent of how shots are split across threads.
class CounterRng {
 public:
  CounterRng(uint64_t seed, uint64_t stream)
      : state_(mix(mix(seed + 0x9e3779b97f4a7c15ull) ^ mix(stream + 0xbf58476d1ce4e5b9ull))) {}

  uint64_t next_u64() {
    state_ += 0x9e3779b97f4a7c15ull;
    return mix(state_);
  }

  // Uniform in [0, 1).
  double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Uniform in [0, m) without modulo bias (Lemire reduction).
  uint32_t next_below(uint32_t m) {
    uint64_t r = next_u64() & 0xffffffffull;
    return static_cast<uint32_t>((r * m) >> 32);
  }

 private:
  static uint64_t mix(uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  uint64_t state_;
};

}  // namespace hvec
