#pragma once

#include <cstdint>

namespace typmatch {

// Stateless mixing and a small counter-based stream. All randomness in the
// library flows through these so results depend only on (seed, counters)
// and never on thread count or iteration order.

constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Child seed for stream `a`, sub-stream `b` of `seed`.
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a,
                                    std::uint64_t b = 0) noexcept {
  return mix64(mix64(seed ^ mix64(a + 0x632be59bd9b4e019ULL)) ^
               mix64(b + 0x8cb92ba72f3d8dd7ULL));
}

/// Uniform double in [0, 1) from 53 high bits.
constexpr double to_unit(std::uint64_t bits) noexcept {
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

/// Value at (seed, block, slot) of the counter-based generator.
constexpr double counter_uniform(std::uint64_t seed, std::uint64_t block,
                                 std::uint64_t slot) noexcept {
  return to_unit(derive_seed(seed, block, slot));
}

/// Sequential SplitMix64 stream.
class SplitMix64 {
 public:
  explicit constexpr SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

  constexpr std::uint64_t next() noexcept {
    state_ += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// Uniform integer in [0, bound) by rejection; bound must be positive.
  constexpr std::uint64_t below(std::uint64_t bound) noexcept {
    const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % bound);
    std::uint64_t r = next();
    while (r >= limit) r = next();
    return r % bound;
  }

  constexpr double uniform() noexcept { return to_unit(next()); }

 private:
  std::uint64_t state_;
};

}  // namespace typmatch
