#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace slitsim {

namespace detail {
inline std::uint64_t splitmix64_step(std::uint64_t& state) {
  state += 0x9E3779B97F4A7C15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}
}  // namespace detail

/// Counter-based generator: each (seed, stream) pair opens an independent
/// deterministic substream, so per-ray sampling is reproducible regardless
/// of how rays are chunked across workers.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed) : state_(seed) {}

  CounterRng(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t s = seed;
    const std::uint64_t a = detail::splitmix64_step(s);
    s = stream ^ 0xD1B54A32D192ED03ULL;
    const std::uint64_t b = detail::splitmix64_step(s);
    state_ = a ^ (b + 0x9E3779B97F4A7C15ULL + (a << 6) + (a >> 2));
  }

  std::uint64_t next_u64() { return detail::splitmix64_step(state_); }

  /// Uniform in [0, 1) with 53 random bits.
  double next_double() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  /// Uniform in (0, 1]; safe as a log() argument.
  double next_open() { return 1.0 - next_double(); }

  double next_uniform(double lo, double hi) {
    return lo + (hi - lo) * next_double();
  }

  /// Standard normal via Box-Muller (cosine branch only).
  double next_gaussian() {
    const double u1 = next_open();
    const double u2 = next_double();
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * std::numbers::pi * u2);
  }

  /// Standard normal conditioned on |z| <= cut, by rejection.
  double next_truncated_gaussian(double cut) {
    for (;;) {
      const double z = next_gaussian();
      if (std::abs(z) <= cut) return z;
    }
  }

 private:
  std::uint64_t state_;
};

}  // namespace slitsim
