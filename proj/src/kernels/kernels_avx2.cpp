// AVX2 variants. Compiled with -mavx2 in its own translation unit; nothing
// here runs unless the dispatcher saw avx2 in cpuid.

#include "gnp/kernels.hpp"

#if defined(GNP_HAVE_AVX2_TU)

#include <immintrin.h>

namespace gnp::kernels::detail {

namespace {

// Low 64 bits of a 64x64 multiply from 32-bit pieces:
// lo(a*b) = lo(a)*lo(b) + ((lo(a)*hi(b) + hi(a)*lo(b)) << 32)
inline __m256i mul64_lo(__m256i a, __m256i b) {
  const __m256i b_swap = _mm256_shuffle_epi32(b, 0xB1);
  const __m256i cross = _mm256_mullo_epi32(a, b_swap);
  const __m256i cross_sum = _mm256_hadd_epi32(cross, _mm256_setzero_si256());
  const __m256i cross_hi = _mm256_shuffle_epi32(cross_sum, 0x73);
  const __m256i lo_lo = _mm256_mul_epu32(a, b);
  return _mm256_add_epi64(lo_lo, cross_hi);
}

// Unsigned 64-bit min; AVX2 only has a signed 64-bit compare, so bias both
// sides by 2^63 first.
inline __m256i min_u64(__m256i a, __m256i b) {
  const __m256i bias = _mm256_set1_epi64x(static_cast<long long>(0x8000000000000000ull));
  const __m256i a_gt_b = _mm256_cmpgt_epi64(_mm256_xor_si256(a, bias),
                                            _mm256_xor_si256(b, bias));
  return _mm256_blendv_epi8(a, b, a_gt_b);
}

}  // namespace

void minhash_update_avx2(std::uint64_t key, const std::uint64_t* mul,
                         const std::uint64_t* add, std::uint64_t* sig,
                         std::size_t lanes) {
  const __m256i k = _mm256_set1_epi64x(static_cast<long long>(key));
  std::size_t i = 0;
  for (; i + 4 <= lanes; i += 4) {
    const __m256i m = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(mul + i));
    const __m256i b = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(add + i));
    const __m256i s = _mm256_loadu_si256(reinterpret_cast<__m256i*>(sig + i));
    const __m256i h = _mm256_add_epi64(mul64_lo(m, k), b);
    _mm256_storeu_si256(reinterpret_cast<__m256i*>(sig + i), min_u64(s, h));
  }
  for (; i < lanes; ++i) {
    const std::uint64_t h = mul[i] * key + add[i];
    if (h < sig[i]) sig[i] = h;
  }
}

void elementwise_min_u64_avx2(std::uint64_t* dst, const std::uint64_t* src,
                              std::size_t lanes) {
  std::size_t i = 0;
  for (; i + 4 <= lanes; i += 4) {
    const __m256i d = _mm256_loadu_si256(reinterpret_cast<__m256i*>(dst + i));
    const __m256i s = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(src + i));
    _mm256_storeu_si256(reinterpret_cast<__m256i*>(dst + i), min_u64(d, s));
  }
  for (; i < lanes; ++i) {
    if (src[i] < dst[i]) dst[i] = src[i];
  }
}

std::size_t match_count_u64_avx2(const std::uint64_t* x, const std::uint64_t* y,
                                 std::size_t lanes) {
  std::size_t count = 0;
  std::size_t i = 0;
  for (; i + 4 <= lanes; i += 4) {
    const __m256i a = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(x + i));
    const __m256i b = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(y + i));
    const __m256i eq = _mm256_cmpeq_epi64(a, b);
    count += static_cast<unsigned>(
        __builtin_popcount(_mm256_movemask_pd(_mm256_castsi256_pd(eq))));
  }
  for (; i < lanes; ++i) count += (x[i] == y[i]);
  return count;
}

std::size_t intersect_count_u32_avx2(const std::uint32_t* a, std::size_t na,
                                     const std::uint32_t* b, std::size_t nb) {
  // Block-wise all-pairs compare: 8 elements of A against all 8 rotations of
  // 8 elements of B, then advance whichever block has the smaller maximum.
  // Requires strictly ascending inputs (set semantics), which also means an
  // element of A matches in at most one B block, so per-round popcounts
  // never double count.
  std::size_t count = 0;
  std::size_t i = 0, j = 0;
  if (na >= 8 && nb >= 8) {
    const __m256i rot1 = _mm256_setr_epi32(1, 2, 3, 4, 5, 6, 7, 0);
    while (i + 8 <= na && j + 8 <= nb) {
      const __m256i va = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(a + i));
      __m256i vb = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(b + j));
      __m256i any = _mm256_cmpeq_epi32(va, vb);
      for (int r = 1; r < 8; ++r) {
        vb = _mm256_permutevar8x32_epi32(vb, rot1);
        any = _mm256_or_si256(any, _mm256_cmpeq_epi32(va, vb));
      }
      count += static_cast<unsigned>(
          __builtin_popcount(_mm256_movemask_ps(_mm256_castsi256_ps(any))));
      const std::uint32_t a_max = a[i + 7];
      const std::uint32_t b_max = b[j + 7];
      if (a_max <= b_max) i += 8;
      if (b_max <= a_max) j += 8;
    }
  }
  while (i < na && j < nb) {
    if (a[i] < b[j]) {
      ++i;
    } else if (b[j] < a[i]) {
      ++j;
    } else {
      ++count;
      ++i;
      ++j;
    }
  }
  return count;
}

}  // namespace gnp::kernels::detail

#endif  // GNP_HAVE_AVX2_TU
