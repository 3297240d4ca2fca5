#pragma once

#include <cmath>
#include <cstdint>
#include <limits>

namespace evoim {

// splitmix64 output function.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Seed of sub-stream `stream` under `master`. Every random consumer in the
// library addresses its randomness by a path of derive() calls, so results do
// not depend on scheduling.
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) noexcept {
  return mix64(master ^ mix64(stream + 0x9e3779b97f4a7c15ULL));
}

// Top-level stream tags.
enum class Stream : std::uint64_t {
  kEvolution = 1,
  kCascade = 2,
  kReverseReach = 3,
  kEvaluation = 4,
  kGroundTruth = 5,
  kTrial = 6,
  kFit = 7,
};

constexpr std::uint64_t derive_seed(std::uint64_t master, Stream tag) noexcept {
  return derive_seed(master, static_cast<std::uint64_t>(tag));
}

// Sequential splitmix64 generator. Satisfies UniformRandomBitGenerator.
class SplitMix64 {
 public:
  using result_type = std::uint64_t;

  explicit constexpr SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

  constexpr result_type operator()() noexcept {
    state_ += 0x9e3779b97f4a7c15ULL;
    return mix64(state_);
  }

  // Uniform double in [0, 1).
  double uniform() noexcept { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

  // Uniform integer in [0, bound), bound > 0 (Lemire's multiply-shift, unbiased).
  std::uint64_t below(std::uint64_t bound) noexcept {
    unsigned __int128 m = static_cast<unsigned __int128>((*this)()) * bound;
    auto low = static_cast<std::uint64_t>(m);
    if (low < bound) {
      const std::uint64_t threshold = (0 - bound) % bound;
      while (low < threshold) {
        m = static_cast<unsigned __int128>((*this)()) * bound;
        low = static_cast<std::uint64_t>(m);
      }
    }
    return static_cast<std::uint64_t>(m >> 64);
  }

  bool bernoulli(double p) noexcept { return uniform() < p; }

  // Successes before the first failure, success probability q in [0, 1).
  // Mean q / (1 - q).
  std::uint64_t geometric(double q) noexcept {
    if (q <= 0.0) return 0;
    const double u = 1.0 - uniform();  // (0, 1]
    return static_cast<std::uint64_t>(std::floor(std::log(u) / std::log(q)));
  }

  std::uint64_t binomial(std::uint64_t trials, double p) noexcept {
    std::uint64_t hits = 0;
    for (std::uint64_t i = 0; i < trials; ++i) hits += bernoulli(p) ? 1 : 0;
    return hits;
  }

 private:
  std::uint64_t state_;
};

}  // namespace evoim
