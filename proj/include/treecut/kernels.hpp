#pragma once

#include <cstddef>
#include <cstdint>

// Span kernels behind the tree DP's inner loops. The DP runs on int64 cells
// whenever the instance's magnitudes fit (see dp_solver.cpp); these kernels
// implement the three data-parallel steps of that fast path:
//   min-plus accumulation   out[j] = min(out[j], s + in[j])
//   boolean accumulation    out[j] |= in[j]
//   threshold test          out[j] = in[j] <= t
// The *_arg variants additionally record `tag` wherever the output changed.
// Ties keep the existing value (first writer wins).

namespace treecut::simd {

/// Infinity of the int64 cell encoding. Finite cells always satisfy
/// |v| < kFiniteBound, so s + in[j] never overflows and anything at or
/// above kInfFloor after an accumulation is infinite.
inline constexpr std::int64_t kInf = std::int64_t{1} << 61;
inline constexpr std::int64_t kInfFloor = std::int64_t{1} << 60;
inline constexpr std::int64_t kFiniteBound = std::int64_t{1} << 59;

struct KernelTable {
  const char* name;
  void (*min_plus)(std::int64_t* out, const std::int64_t* in, std::size_t n, std::int64_t s);
  void (*min_plus_arg)(std::int64_t* out, std::int64_t* arg, const std::int64_t* in, std::size_t n,
                       std::int64_t s, std::int64_t tag);
  void (*or_into)(std::uint8_t* out, const std::uint8_t* in, std::size_t n);
  void (*or_into_arg)(std::uint8_t* out, std::int64_t* arg, const std::uint8_t* in, std::size_t n,
                      std::int64_t tag);
  void (*le_mask)(std::uint8_t* out, const std::int64_t* in, std::size_t n, std::int64_t threshold);
  /// Maps every v >= kInfFloor to kInf.
  void (*saturate)(std::int64_t* v, std::size_t n);
};

const KernelTable& scalar_kernels();

/// nullptr when the build has no AVX2 variant.
const KernelTable* avx2_kernels();

/// Chosen once per process: AVX2 if compiled in and supported by the CPU,
/// else scalar. TREECUT_SIMD=scalar in the environment forces scalar.
const KernelTable& active_kernels();

}  // namespace treecut::simd
