// Compiled with -mavx2; only reached after a runtime CPU check.

#include <immintrin.h>

#include <bit>

#include "evoim/simd/kernels.hpp"

namespace evoim::simd {
namespace {

inline __m256i mix32x8(__m256i x) {
  x = _mm256_xor_si256(x, _mm256_srli_epi32(x, 16));
  x = _mm256_mullo_epi32(x, _mm256_set1_epi32(0x7feb352d));
  x = _mm256_xor_si256(x, _mm256_srli_epi32(x, 15));
  x = _mm256_mullo_epi32(x, _mm256_set1_epi32(static_cast<int>(0x846ca68bU)));
  x = _mm256_xor_si256(x, _mm256_srli_epi32(x, 16));
  return x;
}

void bernoulli_mask_avx2(CoinKey key, std::uint32_t first, std::size_t count,
                         Threshold threshold, std::uint64_t* out) {
  const std::size_t words = words_for_bits(count);
  if (threshold.always || threshold.value == 0) {
    const std::uint64_t fill = threshold.always ? ~std::uint64_t{0} : 0;
    for (std::size_t w = 0; w < words; ++w) out[w] = fill;
    if (threshold.always && count % 64 != 0) out[words - 1] = (std::uint64_t{1} << (count % 64)) - 1;
    return;
  }

  const __m256i lo = _mm256_set1_epi32(static_cast<int>(key.lo));
  const __m256i hi = _mm256_set1_epi32(static_cast<int>(key.hi));
  const __m256i sign = _mm256_set1_epi32(static_cast<int>(0x80000000U));
  // Unsigned coin < value  <=>  signed (value ^ sign) > (coin ^ sign).
  const __m256i limit = _mm256_xor_si256(_mm256_set1_epi32(static_cast<int>(threshold.value)), sign);
  const __m256i lane = _mm256_setr_epi32(0, 1, 2, 3, 4, 5, 6, 7);

  for (std::size_t w = 0; w < words; ++w) {
    const std::size_t base = w * 64;
    std::uint64_t bits = 0;
    for (std::size_t b = 0; b < 64; b += 8) {
      const auto start = static_cast<std::uint32_t>(first + base + b);
      __m256i idx = _mm256_add_epi32(_mm256_set1_epi32(static_cast<int>(start)), lane);
      __m256i c = mix32x8(_mm256_add_epi32(mix32x8(_mm256_xor_si256(idx, lo)), hi));
      __m256i lt = _mm256_cmpgt_epi32(limit, _mm256_xor_si256(c, sign));
      const auto m = static_cast<std::uint32_t>(_mm256_movemask_ps(_mm256_castsi256_ps(lt)));
      bits |= static_cast<std::uint64_t>(m) << b;
    }
    out[w] = bits;
  }
  if (count % 64 != 0) out[words - 1] &= (std::uint64_t{1} << (count % 64)) - 1;
}

// Nibble-lookup popcount over 256-bit blocks.
std::uint64_t popcount_avx2(const std::uint64_t* words, std::size_t count) {
  const __m256i lookup = _mm256_setr_epi8(0, 1, 1, 2, 1, 2, 2, 3, 1, 2, 2, 3, 2, 3, 3, 4,
                                          0, 1, 1, 2, 1, 2, 2, 3, 1, 2, 2, 3, 2, 3, 3, 4);
  const __m256i low_mask = _mm256_set1_epi8(0x0f);
  __m256i acc = _mm256_setzero_si256();
  std::size_t i = 0;
  for (; i + 4 <= count; i += 4) {
    const __m256i v = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(words + i));
    const __m256i lo = _mm256_and_si256(v, low_mask);
    const __m256i hi = _mm256_and_si256(_mm256_srli_epi16(v, 4), low_mask);
    const __m256i cnt = _mm256_add_epi8(_mm256_shuffle_epi8(lookup, lo),
                                        _mm256_shuffle_epi8(lookup, hi));
    acc = _mm256_add_epi64(acc, _mm256_sad_epu8(cnt, _mm256_setzero_si256()));
  }
  alignas(32) std::uint64_t lanes[4];
  _mm256_store_si256(reinterpret_cast<__m256i*>(lanes), acc);
  std::uint64_t total = lanes[0] + lanes[1] + lanes[2] + lanes[3];
  for (; i < count; ++i) total += std::popcount(words[i]);
  return total;
}

std::size_t argmax_u32_avx2(const std::uint32_t* values, std::size_t count) {
  std::size_t i = 0;
  std::uint32_t best = values[0];
  if (count >= 8) {
    __m256i vmax = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(values));
    for (i = 8; i + 8 <= count; i += 8) {
      vmax = _mm256_max_epu32(vmax, _mm256_loadu_si256(reinterpret_cast<const __m256i*>(values + i)));
    }
    alignas(32) std::uint32_t lanes[8];
    _mm256_store_si256(reinterpret_cast<__m256i*>(lanes), vmax);
    for (std::uint32_t v : lanes) best = v > best ? v : best;
  }
  for (std::size_t j = i; j < count; ++j) best = values[j] > best ? values[j] : best;

  // First position holding the maximum.
  const __m256i target = _mm256_set1_epi32(static_cast<int>(best));
  std::size_t j = 0;
  for (; j + 8 <= count; j += 8) {
    const __m256i eq = _mm256_cmpeq_epi32(
        _mm256_loadu_si256(reinterpret_cast<const __m256i*>(values + j)), target);
    const int m = _mm256_movemask_ps(_mm256_castsi256_ps(eq));
    if (m != 0) return j + static_cast<std::size_t>(std::countr_zero(static_cast<unsigned>(m)));
  }
  for (; j < count; ++j) {
    if (values[j] == best) return j;
  }
  return 0;
}

}  // namespace

const KernelTable& avx2_kernel_table() noexcept {
  static constexpr KernelTable table{"avx2", &bernoulli_mask_avx2, &popcount_avx2,
                                     &argmax_u32_avx2};
  return table;
}

}  // namespace evoim::simd
