#pragma once

// Data-parallel inner loops. Each kernel has a scalar reference
// implementation and, where the build and CPU allow, an AVX2 variant. The
// variant is chosen once at first use; all variants must produce identical
// output (see tests/test_kernels.cpp).

#include <cstddef>
#include <cstdint>
#include <span>

#include "evoim/rng.hpp"

namespace evoim::simd {

// Key of a counter-based coin stream: coin(key, i) is a 32-bit hash of i.
struct CoinKey {
  std::uint32_t lo = 0;
  std::uint32_t hi = 0;

  static constexpr CoinKey from_seed(std::uint64_t seed) noexcept {
    const std::uint64_t m = mix64(seed);
    return {static_cast<std::uint32_t>(m), static_cast<std::uint32_t>(m >> 32)};
  }
};

constexpr std::uint32_t mix32(std::uint32_t x) noexcept {
  x ^= x >> 16;
  x *= 0x7feb352dU;
  x ^= x >> 15;
  x *= 0x846ca68bU;
  x ^= x >> 16;
  return x;
}

constexpr std::uint32_t coin(CoinKey key, std::uint32_t index) noexcept {
  return mix32(mix32(index ^ key.lo) + key.hi);
}

// Acceptance rule for a coin: admitted iff coin < value, or always.
struct Threshold {
  std::uint32_t value = 0;
  bool always = false;

  static constexpr Threshold from_probability(double p) noexcept {
    if (p >= 1.0) return {0, true};
    if (!(p > 0.0)) return {0, false};
    const double scaled = p * 4294967296.0;
    return {scaled >= 4294967295.0 ? 0xffffffffU : static_cast<std::uint32_t>(scaled), false};
  }

  constexpr bool admits(std::uint32_t c) const noexcept { return always || c < value; }
};

struct KernelTable {
  const char* name;
  // Bit i of out (LSB-first within 64-bit words) = threshold.admits(coin(key, first + i))
  // for i < count. Writes ceil(count / 64) words; trailing bits are zero.
  void (*bernoulli_mask)(CoinKey key, std::uint32_t first, std::size_t count,
                         Threshold threshold, std::uint64_t* out);
  std::uint64_t (*popcount)(const std::uint64_t* words, std::size_t count);
  // Index of the first maximum of values[0, count); count > 0.
  std::size_t (*argmax_u32)(const std::uint32_t* values, std::size_t count);
};

const KernelTable& scalar_kernels() noexcept;
// nullptr when the build or the CPU lacks AVX2.
const KernelTable* avx2_kernels() noexcept;
// AVX2 when available unless EVOIM_SIMD=scalar is set in the environment.
const KernelTable& active_kernels() noexcept;

inline std::uint64_t popcount(std::span<const std::uint64_t> words) noexcept {
  return active_kernels().popcount(words.data(), words.size());
}

inline std::size_t argmax(std::span<const std::uint32_t> values) noexcept {
  return active_kernels().argmax_u32(values.data(), values.size());
}

constexpr std::size_t words_for_bits(std::size_t bits) noexcept { return (bits + 63) / 64; }

}  // namespace evoim::simd
