#include <cstdlib>
#include <cstring>

#include "treecut/kernels.hpp"

namespace treecut::simd {

namespace {

void min_plus(std::int64_t* out, const std::int64_t* in, std::size_t n, std::int64_t s) {
  for (std::size_t j = 0; j < n; ++j) {
    std::int64_t cand = s + in[j];
    if (cand < out[j]) out[j] = cand;
  }
}

void min_plus_arg(std::int64_t* out, std::int64_t* arg, const std::int64_t* in, std::size_t n,
                  std::int64_t s, std::int64_t tag) {
  for (std::size_t j = 0; j < n; ++j) {
    std::int64_t cand = s + in[j];
    if (cand < out[j]) {
      out[j] = cand;
      arg[j] = tag;
    }
  }
}

void or_into(std::uint8_t* out, const std::uint8_t* in, std::size_t n) {
  for (std::size_t j = 0; j < n; ++j) out[j] |= in[j];
}

void or_into_arg(std::uint8_t* out, std::int64_t* arg, const std::uint8_t* in, std::size_t n,
                 std::int64_t tag) {
  for (std::size_t j = 0; j < n; ++j) {
    if (in[j] && !out[j]) {
      out[j] = 1;
      arg[j] = tag;
    }
  }
}

void le_mask(std::uint8_t* out, const std::int64_t* in, std::size_t n, std::int64_t threshold) {
  for (std::size_t j = 0; j < n; ++j) out[j] = in[j] <= threshold ? 1 : 0;
}

void saturate(std::int64_t* v, std::size_t n) {
  for (std::size_t j = 0; j < n; ++j) {
    if (v[j] >= kInfFloor) v[j] = kInf;
  }
}

}  // namespace

const KernelTable& scalar_kernels() {
  static const KernelTable table{"scalar", min_plus, min_plus_arg, or_into,
                                 or_into_arg, le_mask, saturate};
  return table;
}

const KernelTable& active_kernels() {
  static const KernelTable& chosen = []() -> const KernelTable& {
    const char* forced = std::getenv("TREECUT_SIMD");
    if (forced != nullptr && std::strcmp(forced, "scalar") == 0) return scalar_kernels();
    if (const KernelTable* avx2 = avx2_kernels()) return *avx2;
    return scalar_kernels();
  }();
  return chosen;
}

}  // namespace treecut::simd
