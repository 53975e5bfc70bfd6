#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>
#include <vector>

#include "treecut/kernels.hpp"

using namespace treecut::simd;

namespace {

std::vector<std::int64_t> random_cells(std::mt19937_64& rng, std::size_t n) {
  std::vector<std::int64_t> v(n);
  for (auto& x : v) {
    switch (rng() % 5) {
      case 0: x = kInf; break;
      case 1: x = static_cast<std::int64_t>(rng() % 7) - 3; break;
      case 2: x = kFiniteBound - 1 - static_cast<std::int64_t>(rng() % 4); break;
      case 3: x = -(kFiniteBound - 1); break;
      default: x = static_cast<std::int64_t>(rng() % 2001) - 1000;
    }
  }
  return v;
}

std::vector<std::uint8_t> random_bits(std::mt19937_64& rng, std::size_t n) {
  std::vector<std::uint8_t> v(n);
  for (auto& x : v) x = rng() % 3 == 0;
  return v;
}

std::int64_t random_shift(std::mt19937_64& rng) {
  switch (rng() % 4) {
    case 0: return kInf;
    case 1: return 0;
    case 2: return kFiniteBound - 1;
    default: return static_cast<std::int64_t>(rng() % 401) - 200;
  }
}

}  // namespace

TEST_CASE("active kernels resolve") {
  const KernelTable& k = active_kernels();
  CHECK(k.name != nullptr);
  MESSAGE("active kernels: " << k.name);
}

TEST_CASE("scalar kernel semantics") {
  const KernelTable& s = scalar_kernels();
  std::vector<std::int64_t> out{5, 5, kInf}, in{1, 7, 2}, arg{0, 0, 0};
  s.min_plus_arg(out.data(), arg.data(), in.data(), 3, 4, 9);
  CHECK(out == std::vector<std::int64_t>{5, 5, 6});  // tie at 5 keeps the old value
  CHECK(arg == std::vector<std::int64_t>{0, 0, 9});
  std::vector<std::uint8_t> mask(3);
  s.le_mask(mask.data(), out.data(), 3, 5);
  CHECK(mask == std::vector<std::uint8_t>{1, 1, 0});
  std::vector<std::int64_t> sat{kInfFloor, kInfFloor - 1, kInf + 5};
  s.saturate(sat.data(), 3);
  CHECK(sat == std::vector<std::int64_t>{kInf, kInfFloor - 1, kInf});
}

TEST_CASE("avx2 kernels match scalar on random spans") {
  const KernelTable* v = avx2_kernels();
  if (!v) {
    MESSAGE("AVX2 kernels not available; skipping");
    return;
  }
  const KernelTable& s = scalar_kernels();
  std::mt19937_64 rng(42);
  for (int trial = 0; trial < 3000; ++trial) {
    const std::size_t n = rng() % 70;
    CAPTURE(n);
    const std::int64_t shift = random_shift(rng);
    const std::int64_t tag = static_cast<std::int64_t>(rng() % 1000) + 1;
    auto in = random_cells(rng, n);
    auto out0 = random_cells(rng, n);
    if (shift >= kInfFloor) {
      // min_plus is only called with finite shifts; keep the sum in range
      for (auto& x : in) x = kInf;
    }

    auto a = out0, b = out0;
    s.min_plus(a.data(), in.data(), n, shift >= kInfFloor ? 0 : shift);
    v->min_plus(b.data(), in.data(), n, shift >= kInfFloor ? 0 : shift);
    s.saturate(a.data(), n);
    v->saturate(b.data(), n);
    CHECK(a == b);

    a = out0;
    b = out0;
    std::vector<std::int64_t> arg_a(n, -1), arg_b(n, -1);
    s.min_plus_arg(a.data(), arg_a.data(), in.data(), n, shift >= kInfFloor ? 0 : shift, tag);
    v->min_plus_arg(b.data(), arg_b.data(), in.data(), n, shift >= kInfFloor ? 0 : shift, tag);
    CHECK(a == b);
    CHECK(arg_a == arg_b);

    auto bits_in = random_bits(rng, n);
    auto bits0 = random_bits(rng, n);
    auto ba = bits0, bb = bits0;
    s.or_into(ba.data(), bits_in.data(), n);
    v->or_into(bb.data(), bits_in.data(), n);
    CHECK(ba == bb);

    ba = bits0;
    bb = bits0;
    std::fill(arg_a.begin(), arg_a.end(), -1);
    std::fill(arg_b.begin(), arg_b.end(), -1);
    s.or_into_arg(ba.data(), arg_a.data(), bits_in.data(), n, tag);
    v->or_into_arg(bb.data(), arg_b.data(), bits_in.data(), n, tag);
    CHECK(ba == bb);
    CHECK(arg_a == arg_b);

    std::vector<std::uint8_t> ma(n), mb(n);
    const std::int64_t t = rng() % 2 ? random_shift(rng) : in.empty() ? 0 : in[rng() % n];
    s.le_mask(ma.data(), in.data(), n, t);
    v->le_mask(mb.data(), in.data(), n, t);
    CHECK(ma == mb);

    auto sa = in, sb = in;
    for (auto& x : sa) x += rng() % 2 ? kInfFloor : 0;
    sb = sa;
    s.saturate(sa.data(), n);
    v->saturate(sb.data(), n);
    CHECK(sa == sb);
  }
}
