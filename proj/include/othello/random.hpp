#pragma once

#include <cstdint>
#include <random>

namespace othello {

/// Seedable random stream used for every stochastic decision (epsilon coins,
/// tie-breaks, mutation). Substreams are derived from (master, index) with a
/// stateless mix, so work items can be scheduled in any order.
class RandomStream {
 public:
  using result_type = std::uint64_t;

  explicit RandomStream(std::uint64_t seed = 0) : engine_(mix(seed)) {}

  static RandomStream substream(std::uint64_t master, std::uint64_t index) {
    return RandomStream(mix(master) ^ mix(index + 0x632be59bd9b4e019ULL));
  }

  static constexpr result_type min() { return std::mt19937_64::min(); }
  static constexpr result_type max() { return std::mt19937_64::max(); }
  result_type operator()() { return engine_(); }

  /// Uniform integer in [0, n). Lemire's multiply-and-reject; n must be > 0.
  std::uint32_t below(std::uint32_t n) {
    std::uint64_t x = engine_() >> 32;
    std::uint64_t m = x * n;
    auto low = static_cast<std::uint32_t>(m);
    if (low < n) {
      const std::uint32_t threshold = static_cast<std::uint32_t>(-n) % n;
      while (low < threshold) {
        x = engine_() >> 32;
        m = x * n;
        low = static_cast<std::uint32_t>(m);
      }
    }
    return static_cast<std::uint32_t>(m >> 32);
  }

  /// Uniform real in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  bool bernoulli(double p) { return uniform() < p; }

  double uniform(double low, double high) { return low + (high - low) * uniform(); }

  double normal(double mean, double stddev) {
    return std::normal_distribution<double>(mean, stddev)(*this);
  }

  static constexpr std::uint64_t mix(std::uint64_t z) {
    // splitmix64 finalizer
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace othello
