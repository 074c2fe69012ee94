#ifndef MBC_RNG_HPP
#define MBC_RNG_HPP

#include <cmath>
#include <cstdint>

namespace mbc {

/// xoshiro256** with splitmix64 seeding.  long_jump() advances 2^192 steps,
/// giving each worker a disjoint substream of one logical sequence.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) {
    std::uint64_t x = seed;
    for (auto& word : state_) {
      // splitmix64
      x += 0x9E3779B97F4A7C15ull;
      std::uint64_t z = x;
      z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
      z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
      word = z ^ (z >> 31);
    }
  }

  std::uint64_t next() {
    const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  /// Uniform on (0, 1]; safe as a log argument.
  double uniform_pos() { return 1.0 - uniform(); }

  double exponential() { return -std::log(uniform_pos()); }

  void long_jump() {
    static constexpr std::uint64_t jump[] = {0x76E15D3EFEFDCBBFull, 0xC5004E441C522FB3ull,
                                             0x77710069854EE241ull, 0x39109BB02ACBE635ull};
    std::uint64_t s0 = 0, s1 = 0, s2 = 0, s3 = 0;
    for (std::uint64_t j : jump)
      for (int b = 0; b < 64; ++b) {
        if (j & (1ull << b)) {
          s0 ^= state_[0];
          s1 ^= state_[1];
          s2 ^= state_[2];
          s3 ^= state_[3];
        }
        next();
      }
    state_[0] = s0;
    state_[1] = s1;
    state_[2] = s2;
    state_[3] = s3;
  }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
  std::uint64_t state_[4];
};

/// Standard normal draw by quantile inversion.
double sample_normal(Rng& rng);

/// Gamma(shape, rate 1) draw; Marsaglia-Tsang, with the U^{1/shape} boost
/// for shape < 1.
double sample_gamma(Rng& rng, double shape);

/// Beta(a, b) draw as a ratio of gammas.
double sample_beta(Rng& rng, double a, double b);

}  // namespace mbc

#endif
