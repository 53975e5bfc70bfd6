// Compiled with -mavx2 on x86-64 only; dispatch happens in avx2_kernels().

#include "treecut/kernels.hpp"

#if defined(__x86_64__) && defined(__AVX2__)
#include <immintrin.h>

namespace treecut::simd {

namespace {

void min_plus(std::int64_t* out, const std::int64_t* in, std::size_t n, std::int64_t s) {
  const __m256i sv = _mm256_set1_epi64x(s);
  std::size_t j = 0;
  for (; j + 4 <= n; j += 4) {
    __m256i o = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(out + j));
    __m256i c = _mm256_add_epi64(sv, _mm256_loadu_si256(reinterpret_cast<const __m256i*>(in + j)));
    __m256i better = _mm256_cmpgt_epi64(o, c);
    _mm256_storeu_si256(reinterpret_cast<__m256i*>(out + j), _mm256_blendv_epi8(o, c, better));
  }
  for (; j < n; ++j) {
    std::int64_t c = s + in[j];
    if (c < out[j]) out[j] = c;
  }
}

void min_plus_arg(std::int64_t* out, std::int64_t* arg, const std::int64_t* in, std::size_t n,
                  std::int64_t s, std::int64_t tag) {
  const __m256i sv = _mm256_set1_epi64x(s);
  const __m256i tv = _mm256_set1_epi64x(tag);
  std::size_t j = 0;
  for (; j + 4 <= n; j += 4) {
    __m256i o = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(out + j));
    __m256i a = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(arg + j));
    __m256i c = _mm256_add_epi64(sv, _mm256_loadu_si256(reinterpret_cast<const __m256i*>(in + j)));
    __m256i better = _mm256_cmpgt_epi64(o, c);
    _mm256_storeu_si256(reinterpret_cast<__m256i*>(out + j), _mm256_blendv_epi8(o, c, better));
    _mm256_storeu_si256(reinterpret_cast<__m256i*>(arg + j), _mm256_blendv_epi8(a, tv, better));
  }
  for (; j < n; ++j) {
    std::int64_t c = s + in[j];
    if (c < out[j]) {
      out[j] = c;
      arg[j] = tag;
    }
  }
}

void or_into(std::uint8_t* out, const std::uint8_t* in, std::size_t n) {
  std::size_t j = 0;
  for (; j + 32 <= n; j += 32) {
    __m256i o = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(out + j));
    __m256i i = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(in + j));
    _mm256_storeu_si256(reinterpret_cast<__m256i*>(out + j), _mm256_or_si256(o, i));
  }
  for (; j < n; ++j) out[j] |= in[j];
}

void or_into_arg(std::uint8_t* out, std::int64_t* arg, const std::uint8_t* in, std::size_t n,
                 std::int64_t tag) {
  std::size_t j = 0;
  for (; j + 32 <= n; j += 32) {
    __m256i o = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(out + j));
    __m256i i = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(in + j));
    __m256i fresh = _mm256_andnot_si256(o, i);
    auto bits = static_cast<std::uint32_t>(
        _mm256_movemask_epi8(_mm256_cmpgt_epi8(fresh, _mm256_setzero_si256())));
    if (bits == 0) continue;
    _mm256_storeu_si256(reinterpret_cast<__m256i*>(out + j), _mm256_or_si256(o, i));
    while (bits != 0) {
      arg[j + static_cast<std::size_t>(__builtin_ctz(bits))] = tag;
      bits &= bits - 1;
    }
  }
  for (; j < n; ++j) {
    if (in[j] && !out[j]) {
      out[j] = 1;
      arg[j] = tag;
    }
  }
}

void le_mask(std::uint8_t* out, const std::int64_t* in, std::size_t n, std::int64_t threshold) {
  const __m256i tv = _mm256_set1_epi64x(threshold);
  std::size_t j = 0;
  for (; j + 4 <= n; j += 4) {
    __m256i v = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(in + j));
    int above = _mm256_movemask_pd(_mm256_castsi256_pd(_mm256_cmpgt_epi64(v, tv)));
    for (int b = 0; b < 4; ++b) out[j + b] = ((above >> b) & 1) ? 0 : 1;
  }
  for (; j < n; ++j) out[j] = in[j] <= threshold ? 1 : 0;
}

void saturate(std::int64_t* v, std::size_t n) {
  const __m256i floor_minus_one = _mm256_set1_epi64x(kInfFloor - 1);
  const __m256i inf = _mm256_set1_epi64x(kInf);
  std::size_t j = 0;
  for (; j + 4 <= n; j += 4) {
    __m256i x = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(v + j));
    __m256i big = _mm256_cmpgt_epi64(x, floor_minus_one);
    _mm256_storeu_si256(reinterpret_cast<__m256i*>(v + j), _mm256_blendv_epi8(x, inf, big));
  }
  for (; j < n; ++j) {
    if (v[j] >= kInfFloor) v[j] = kInf;
  }
}

}  // namespace

const KernelTable* avx2_kernels() {
  static const KernelTable table{"avx2", min_plus, min_plus_arg, or_into,
                                 or_into_arg, le_mask, saturate};
  static const bool supported = __builtin_cpu_supports("avx2");
  return supported ? &table : nullptr;
}

}  // namespace treecut::simd

#else

namespace treecut::simd {
const KernelTable* avx2_kernels() { return nullptr; }
}  // namespace treecut::simd

#endif
