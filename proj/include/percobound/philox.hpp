#pragma once

// Philox4x32-10 counter-based generator (Salmon et al., SC 2011). Every draw
// is a pure function of (key, counter), so random streams do not depend on
// execution order or thread count.

#include <array>
#include <cstdint>

namespace percobound {

using PhiloxCounter = std::array<std::uint32_t, 4>;
using PhiloxKey = std::array<std::uint32_t, 2>;

namespace detail {

inline constexpr std::uint32_t kPhiloxM0 = 0xD2511F53u;
inline constexpr std::uint32_t kPhiloxM1 = 0xCD9E8D57u;
inline constexpr std::uint32_t kPhiloxW0 = 0x9E3779B9u;
inline constexpr std::uint32_t kPhiloxW1 = 0xBB67AE85u;

constexpr PhiloxCounter philox_round(const PhiloxCounter& c, const PhiloxKey& k) {
  const std::uint64_t p0 = static_cast<std::uint64_t>(kPhiloxM0) * c[0];
  const std::uint64_t p1 = static_cast<std::uint64_t>(kPhiloxM1) * c[2];
  const auto hi0 = static_cast<std::uint32_t>(p0 >> 32);
  const auto lo0 = static_cast<std::uint32_t>(p0);
  const auto hi1 = static_cast<std::uint32_t>(p1 >> 32);
  const auto lo1 = static_cast<std::uint32_t>(p1);
  return {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
}

}  // namespace detail

constexpr PhiloxCounter philox4x32_10(PhiloxCounter ctr, PhiloxKey key) {
  for (int r = 0; r < 10; ++r) {
    if (r > 0) {
      key[0] += detail::kPhiloxW0;
      key[1] += detail::kPhiloxW1;
    }
    ctr = detail::philox_round(ctr, key);
  }
  return ctr;
}

constexpr PhiloxKey philox_key(std::uint64_t seed) {
  return {static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)};
}

// Stream tags keep draws for different purposes from colliding.
enum class StreamTag : std::uint32_t {
  kPercolation = 0x50455243u,  // "PERC"
  kGenerator = 0x47454e52u,    // "GENR"
  kTest = 0x54455354u,         // "TEST"
};

// 64 random bits addressed by (seed, tag, a, b).
constexpr std::uint64_t counter_bits(std::uint64_t seed, StreamTag tag, std::uint64_t a,
                                     std::uint32_t b) {
  const PhiloxCounter ctr{static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(a >> 32), b,
                          static_cast<std::uint32_t>(tag)};
  const PhiloxCounter out = philox4x32_10(ctr, philox_key(seed));
  return (static_cast<std::uint64_t>(out[1]) << 32) | out[0];
}

// Uniform double in [0, 1) with 53 random mantissa bits.
constexpr double bits_to_unit(std::uint64_t bits) {
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

// Sequential stream over a counter-based generator. Used where a procedure
// needs an unbounded number of draws (graph generators, randomized tests).
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, StreamTag tag, std::uint32_t stream = 0)
      : seed_(seed), tag_(tag), stream_(stream) {}

  std::uint64_t next_u64() { return counter_bits(seed_, tag_, position_++, stream_); }

  double uniform01() { return bits_to_unit(next_u64()); }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  // Uniform integer in [0, bound) by rejection; bound must be > 0.
  std::uint64_t below(std::uint64_t bound) {
    const std::uint64_t limit = bound * (UINT64_MAX / bound);
    std::uint64_t x = next_u64();
    while (x >= limit) x = next_u64();
    return x % bound;
  }

 private:
  std::uint64_t seed_;
  StreamTag tag_;
  std::uint32_t stream_;
  std::uint64_t position_ = 0;
};

}  // namespace percobound
