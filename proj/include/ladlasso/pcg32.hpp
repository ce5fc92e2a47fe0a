#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>

namespace ladlasso {

// PCG-XSH-RR 64/32 (O'Neill), the generator behind pcg32_random_r. Satisfies
// UniformRandomBitGenerator so it also plugs into <random> distributions, but the data
// generator only uses the portable helpers below.
class Pcg32 {
 public:
  using result_type = std::uint32_t;

  static constexpr std::uint64_t kDefaultStream = 54;

  explicit Pcg32(std::uint64_t seed = 42, std::uint64_t stream = kDefaultStream) { this->seed(seed, stream); }

  void seed(std::uint64_t init_state, std::uint64_t stream = kDefaultStream) {
    state_ = 0;
    inc_ = (stream << 1u) | 1u;
    (*this)();
    state_ += init_state;
    (*this)();
  }

  result_type operator()() {
    const std::uint64_t old = state_;
    state_ = old * 6364136223846793005ULL + inc_;
    const auto xorshifted = static_cast<std::uint32_t>(((old >> 18u) ^ old) >> 27u);
    const auto rot = static_cast<std::uint32_t>(old >> 59u);
    return (xorshifted >> rot) | (xorshifted << ((-rot) & 31u));
  }

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  // Unbiased integer in [0, bound) by rejection.
  std::uint32_t bounded(std::uint32_t bound) {
    const std::uint32_t threshold = (0u - bound) % bound;
    for (;;) {
      const std::uint32_t r = (*this)();
      if (r >= threshold) return r % bound;
    }
  }

  // 53-bit double in [0, 1) from two consecutive draws.
  double uniform01() {
    const std::uint64_t a = (*this)() >> 5;
    const std::uint64_t b = (*this)() >> 6;
    return static_cast<double>(a * 67108864ULL + b) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  // Box-Muller, cosine branch only: every normal consumes exactly two uniforms.
  double normal() {
    const double u1 = 1.0 - uniform01();
    const double u2 = uniform01();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

 private:
  std::uint64_t state_ = 0;
  std::uint64_t inc_ = 0;
};

}  // namespace ladlasso
