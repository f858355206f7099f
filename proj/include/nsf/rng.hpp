#pragma once

#include <array>
#include <cstdint>

namespace nsf::rng {

/// SplitMix64 (Steele, Lea, Flood). Used to expand and derive seeds.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

  std::uint64_t next() noexcept {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

 private:
  std::uint64_t state_;
};

/// xoshiro256++ 1.0 (Blackman, Vigna), state filled from SplitMix64(seed).
class Xoshiro256pp {
 public:
  explicit Xoshiro256pp(std::uint64_t seed) noexcept {
    SplitMix64 sm(seed);
    for (auto& w : s_) w = sm.next();
  }

  std::uint64_t next() noexcept {
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

  /// Top 53 bits mapped to [0, 1).
  double uniform01() noexcept { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform01(); }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) noexcept { return (x << k) | (x >> (64 - k)); }

  std::array<std::uint64_t, 4> s_{};
};

/// Seed of sample `member` in group `group`:
///   h0 = SplitMix64(base).next()
///   h1 = SplitMix64(h0 ^ group).next()
///   seed = SplitMix64(h1 ^ member).next()
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t group,
                                 std::uint64_t member) noexcept {
  const std::uint64_t h0 = SplitMix64(base).next();
  const std::uint64_t h1 = SplitMix64(h0 ^ group).next();
  return SplitMix64(h1 ^ member).next();
}

}  // namespace nsf::rng
