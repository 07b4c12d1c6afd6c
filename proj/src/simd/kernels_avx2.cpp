#include "polyform/simd/kernels.hpp"

#if defined(POLYFORM_HAVE_AVX2)
#include <immintrin.h>
#endif

namespace polyform::simd {

#if defined(POLYFORM_HAVE_AVX2)

namespace {

__attribute__((target("avx2"))) inline __m256i floor_div_scaled(__m256i v, std::int32_t scale) {
  // floor(v / scale) * scale through doubles; exact for |v| < 2^31.
  const __m256d s = _mm256_set1_pd(static_cast<double>(scale));
  __m256d lo = _mm256_cvtepi32_pd(_mm256_castsi256_si128(v));
  __m256d hi = _mm256_cvtepi32_pd(_mm256_extracti128_si256(v, 1));
  lo = _mm256_floor_pd(_mm256_div_pd(lo, s));
  hi = _mm256_floor_pd(_mm256_div_pd(hi, s));
  __m256i q = _mm256_set_m128i(_mm256_cvttpd_epi32(hi), _mm256_cvttpd_epi32(lo));
  return _mm256_mullo_epi32(q, _mm256_set1_epi32(scale));
}

__attribute__((target("avx2"))) void transform_normalize_avx2(const OrientationPack& pack,
                                                              const std::int32_t* cells, std::size_t n,
                                                              std::int32_t* out) {
  const std::size_t d = pack.dim, P = pack.padded;
  for (std::size_t k = 0; k < P; k += kLanes) {
    for (std::size_t i = 0; i < d; ++i) {
      const __m256i off = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(&pack.offset[i * P + k]));
      __m256i lo = _mm256_set1_epi32(0x7fffffff);
      for (std::size_t c = 0; c < n; ++c) {
        __m256i acc = off;
        for (std::size_t j = 0; j < d; ++j) {
          const __m256i m =
              _mm256_loadu_si256(reinterpret_cast<const __m256i*>(&pack.linear[(i * d + j) * P + k]));
          acc = _mm256_add_epi32(acc, _mm256_mullo_epi32(m, _mm256_set1_epi32(cells[c * d + j])));
        }
        _mm256_storeu_si256(reinterpret_cast<__m256i*>(&out[(c * d + i) * P + k]), acc);
        lo = _mm256_min_epi32(lo, acc);
      }
      const __m256i shift = _mm256_sub_epi32(_mm256_setzero_si256(), floor_div_scaled(lo, pack.scale));
      for (std::size_t c = 0; c < n; ++c) {
        auto* slot = reinterpret_cast<__m256i*>(&out[(c * d + i) * P + k]);
        _mm256_storeu_si256(slot, _mm256_add_epi32(_mm256_loadu_si256(slot), shift));
      }
    }
  }
}

__attribute__((target("avx2"))) void lex_min_avx2(const OrientationPack& pack, const std::int32_t* t,
                                                  std::size_t n, std::int32_t* out) {
  const std::size_t d = pack.dim, P = pack.padded;
  // d is tiny in practice; cap the register file and fall back beyond it.
  constexpr std::size_t kMaxDim = 8;
  if (d > kMaxDim) {
    scalar_kernels().lex_min(pack, t, n, out);
    return;
  }
  for (std::size_t k = 0; k < P; k += kLanes) {
    __m256i best[kMaxDim];
    for (std::size_t i = 0; i < d; ++i)
      best[i] = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(&t[i * P + k]));
    for (std::size_t c = 1; c < n; ++c) {
      __m256i lt = _mm256_setzero_si256();
      __m256i eq = _mm256_set1_epi32(-1);
      __m256i x[kMaxDim];
      for (std::size_t i = 0; i < d; ++i) {
        x[i] = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(&t[(c * d + i) * P + k]));
        lt = _mm256_or_si256(lt, _mm256_and_si256(eq, _mm256_cmpgt_epi32(best[i], x[i])));
        eq = _mm256_and_si256(eq, _mm256_cmpeq_epi32(best[i], x[i]));
      }
      for (std::size_t i = 0; i < d; ++i) best[i] = _mm256_blendv_epi8(best[i], x[i], lt);
    }
    for (std::size_t i = 0; i < d; ++i)
      _mm256_storeu_si256(reinterpret_cast<__m256i*>(&out[i * P + k]), best[i]);
  }
}

}  // namespace

const KernelTable* avx2_kernels() {
  static const bool supported = __builtin_cpu_supports("avx2");
  static const KernelTable table{"avx2", transform_normalize_avx2, lex_min_avx2};
  return supported ? &table : nullptr;
}

#else

const KernelTable* avx2_kernels() { return nullptr; }

#endif

}  // namespace polyform::simd
