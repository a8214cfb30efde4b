// Compiled with -mavx2 -mfma; only reached after a run-time CPU check.

#include <immintrin.h>

#include "pns/kernels.hpp"

namespace pns::kernels {

namespace {

// Each table entry is at most 2^52 in magnitude, so a 64-bit lane can absorb
// 2^10 of them before it has to be drained into the 128-bit total.
constexpr std::size_t kDrainEvery = 1024;

i128 drain(__m256i& acc) {
  alignas(32) std::int64_t lanes[4];
  _mm256_store_si256(reinterpret_cast<__m256i*>(lanes), acc);
  acc = _mm256_setzero_si256();
  return static_cast<i128>(lanes[0]) + lanes[1] + lanes[2] + lanes[3];
}

}  // namespace

i128 gather_sum_avx2(const UnitTableView& table, std::uint32_t a, std::uint32_t b) {
  const std::size_t n = table.units.size();
  const auto* units = table.units.data();
  const auto* inverses = table.inverses.data();
  const auto* cos_fixed = reinterpret_cast<const long long*>(table.cos_fixed.data());

  // a x + b x^-1 < 2 c^2 < 2^53 is exact in double; the quotient estimate is
  // off by at most one and is fixed up below.
  const __m256d vc = _mm256_set1_pd(static_cast<double>(table.modulus));
  const __m256d vinv = _mm256_set1_pd(1.0 / static_cast<double>(table.modulus));
  const __m256d va = _mm256_set1_pd(static_cast<double>(a));
  const __m256d vb = _mm256_set1_pd(static_cast<double>(b));
  const __m256d zero = _mm256_setzero_pd();

  __m256i acc = _mm256_setzero_si256();
  i128 total = 0;
  std::size_t i = 0;
  std::size_t since_drain = 0;
  for (; i + 4 <= n; i += 4) {
    const __m128i xi = _mm_loadu_si128(reinterpret_cast<const __m128i*>(units + i));
    const __m128i yi = _mm_loadu_si128(reinterpret_cast<const __m128i*>(inverses + i));
    const __m256d x = _mm256_cvtepi32_pd(xi);
    const __m256d y = _mm256_cvtepi32_pd(yi);
    const __m256d v = _mm256_fmadd_pd(va, x, _mm256_mul_pd(vb, y));
    const __m256d q = _mm256_floor_pd(_mm256_mul_pd(v, vinv));
    __m256d r = _mm256_fnmadd_pd(q, vc, v);
    r = _mm256_add_pd(r, _mm256_and_pd(_mm256_cmp_pd(r, zero, _CMP_LT_OQ), vc));
    r = _mm256_sub_pd(r, _mm256_and_pd(_mm256_cmp_pd(r, vc, _CMP_GE_OQ), vc));
    const __m128i idx = _mm256_cvttpd_epi32(r);
    acc = _mm256_add_epi64(acc, _mm256_i32gather_epi64(cos_fixed, idx, 8));
    if (++since_drain == kDrainEvery) {
      total += drain(acc);
      since_drain = 0;
    }
  }
  total += drain(acc);

  const std::uint64_t c = table.modulus;
  for (; i < n; ++i) {
    const std::uint64_t t = (static_cast<std::uint64_t>(a) * units[i] + static_cast<std::uint64_t>(b) * inverses[i]) % c;
    total += table.cos_fixed[t];
  }
  return total;
}

}  // namespace pns::kernels
