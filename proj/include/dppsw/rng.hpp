#pragma once

#include <cstdint>
#include <cmath>

namespace dppsw {

/// splitmix64; used to expand (seed, stream) pairs into xoshiro state.
inline uint64_t splitmix64(uint64_t& state) {
  uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// xoshiro256++ with per-path streams derived deterministically from
/// (seed, stream_id). The contract is stream independence and seed
/// determinism; results are bit-stable on a fixed platform.
class Xoshiro256pp {
 public:
  Xoshiro256pp(uint64_t seed, uint64_t stream_id) {
    uint64_t sm = seed ^ (0x9e3779b97f4a7c15ULL * (stream_id + 1));
    for (auto& w : s_) w = splitmix64(sm);
  }

  uint64_t next() {
    const uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
    const uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  /// uniform in (0,1)
  double uniform() { return (next() >> 11) * 0x1.0p-53 + 0x1.0p-54; }

  /// standard normal (Box-Muller; one value cached)
  double normal() {
    if (have_cached_) {
      have_cached_ = false;
      return cached_;
    }
    double u1 = uniform(), u2 = uniform();
    double r = std::sqrt(-2.0 * std::log(u1));
    double a = 6.283185307179586476925286766559 * u2;
    cached_ = r * std::sin(a);
    have_cached_ = true;
    return r * std::cos(a);
  }

 private:
  static uint64_t rotl(uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
  uint64_t s_[4];
  double cached_ = 0.0;
  bool have_cached_ = false;
};

}  // namespace dppsw
