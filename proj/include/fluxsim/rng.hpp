#pragma once

#include <cstdint>

// xoshiro256++ with splitmix64 seeding.  Used instead of <random> engines so
// that runs are bit-for-bit reproducible across platforms and standard library
// implementations (uniform_real_distribution is implementation-defined).
// Independent streams are derived from (seed, stream_id) pairs.

namespace fluxsim {

inline std::uint64_t splitmix64_next(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

class Xoshiro256 {
 public:
  explicit Xoshiro256(std::uint64_t seed, std::uint64_t stream = 0) {
    std::uint64_t sm = seed ^ (0x6a09e667f3bcc909ULL * (stream + 1));
    s_[0] = splitmix64_next(sm);
    s_[1] = splitmix64_next(sm);
    s_[2] = splitmix64_next(sm);
    s_[3] = splitmix64_next(sm);
  }

  std::uint64_t next_u64() {
    const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  // uniform in [0, 1), 53-bit resolution
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // uniform in [-half_width, half_width)
  double uniform_symmetric(double half_width) {
    return (2.0 * uniform() - 1.0) * half_width;
  }

  // uniform integer in [0, n), rejection sampled (no modulo bias)
  std::uint64_t uniform_index(std::uint64_t n) {
    const std::uint64_t threshold = (0ULL - n) % n;
    for (;;) {
      std::uint64_t r = next_u64();
      if (r >= threshold) return r % n;
    }
  }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }
  std::uint64_t s_[4];
};

}  // namespace fluxsim
