#pragma once

// Seedable, platform-independent random number generation.
//
// Core generator: xoshiro256** seeded through SplitMix64.  Parallel work
// derives one independent stream per logical unit (sample index, worker
// chunk) as derive_stream(seed, index); the derivation walks the SplitMix64
// Weyl sequence, so streams for distinct indices never share state and the
// assignment is independent of thread count.  Uniform doubles take the top
// 53 bits of the 64-bit output; Gaussians use the Marsaglia polar transform.

#include <cstdint>

namespace qclass {

struct SplitMix64 {
  std::uint64_t state;

  explicit SplitMix64(std::uint64_t seed) : state(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }
};

class Xoshiro256 {
 public:
  explicit Xoshiro256(std::uint64_t seed) {
    SplitMix64 sm(seed);
    for (auto& w : s_) w = sm.next();
    if ((s_[0] | s_[1] | s_[2] | s_[3]) == 0) s_[0] = 0x9E3779B97F4A7C15ULL;
  }

  std::uint64_t next() {
    const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  // uniform in [0, 1)
  double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  // standard normal via the polar method; one spare value is cached
  double gaussian() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u, v, s;
    do {
      u = 2.0 * uniform01() - 1.0;
      v = 2.0 * uniform01() - 1.0;
      s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double f = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * f;
    has_spare_ = true;
    return u * f;
  }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

  std::uint64_t s_[4];
  double spare_ = 0.0;
  bool has_spare_ = false;
};

// Independent stream for logical unit `index` under a master seed.  The
// index is avalanched before seeding so that neighbouring indices land on
// unrelated SplitMix64 windows.
inline Xoshiro256 derive_stream(std::uint64_t seed, std::uint64_t index) {
  SplitMix64 sm(seed ^ (0xD1B54A32D192ED03ULL * (index + 1)));
  return Xoshiro256(sm.next());
}

}  // namespace qclass
