#pragma once

#include <cmath>
#include <cstdint>

namespace seedgen {

// Deterministic 64-bit stream (splitmix64). Used instead of <random>
// engines/distributions so generated bytes are identical across standard
// library implementations.
class Rng {
 public:
  explicit Rng(uint64_t seed) : state_(seed) {}

  uint64_t next_u64() {
    uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform in [0, 1).
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Uniform integer in [0, n). n must be > 0.
  uint64_t uniform_index(uint64_t n) {
    // Rejection sampling to avoid modulo bias.
    uint64_t threshold = (0ULL - n) % n;
    for (;;) {
      uint64_t r = next_u64();
      if (r >= threshold) return r % n;
    }
  }

  // Exponential inter-arrival with the given rate (per unit time).
  double exponential(double rate) {
    double u;
    do {
      u = uniform();
    } while (u <= 0.0);
    return -std::log1p(-u) / rate;
  }

 private:
  uint64_t state_;
};

// Derives an independent stream for a (master seed, stream index) pair.
// Two mixing rounds so consecutive chunk indices land far apart.
inline Rng derive_stream(uint64_t master_seed, uint64_t stream_index) {
  Rng mixer(master_seed ^ (0x6a09e667f3bcc909ULL + stream_index * 0x3c6ef372fe94f82bULL));
  uint64_t a = mixer.next_u64();
  uint64_t b = mixer.next_u64();
  return Rng(a ^ (b << 1));
}

}  // namespace seedgen
