#include <bit>

#include "evoim/simd/kernels.hpp"

namespace evoim::simd {
namespace {

void bernoulli_mask_scalar(CoinKey key, std::uint32_t first, std::size_t count,
                           Threshold threshold, std::uint64_t* out) {
  const std::size_t words = words_for_bits(count);
  for (std::size_t w = 0; w < words; ++w) {
    const std::size_t base = w * 64;
    const std::size_t lim = count - base < 64 ? count - base : 64;
    std::uint64_t bits = 0;
    for (std::size_t b = 0; b < lim; ++b) {
      const auto index = static_cast<std::uint32_t>(first + base + b);
      if (threshold.admits(coin(key, index))) bits |= std::uint64_t{1} << b;
    }
    out[w] = bits;
  }
}

std::uint64_t popcount_scalar(const std::uint64_t* words, std::size_t count) {
  std::uint64_t total = 0;
  for (std::size_t i = 0; i < count; ++i) total += std::popcount(words[i]);
  return total;
}

std::size_t argmax_u32_scalar(const std::uint32_t* values, std::size_t count) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < count; ++i) {
    if (values[i] > values[best]) best = i;
  }
  return best;
}

}  // namespace

const KernelTable& scalar_kernels() noexcept {
  static constexpr KernelTable table{"scalar", &bernoulli_mask_scalar, &popcount_scalar,
                                     &argmax_u32_scalar};
  return table;
}

}  // namespace evoim::simd
