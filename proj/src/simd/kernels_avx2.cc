//
// Copyright 2026 The FairQuery Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

// Compiled with -mavx2 (no -mfma). Only reached through the dispatcher after
// a runtime CPU check.
#include "fairquery/simd/kernels.h"

#if defined(__x86_64__) || defined(_M_X64)
#include <immintrin.h>

#include <cstring>

namespace fairquery::simd::avx2 {
namespace {

// lo holds lanes 0..3 and hi lanes 4..7 of the canonical order.
inline double combine(__m256d lo, __m256d hi) {
  const __m256d s = _mm256_add_pd(lo, hi);  // l0+l4, l1+l5, l2+l6, l3+l7
  const __m128d t = _mm_add_pd(_mm256_castpd256_pd128(s),
                               _mm256_extractf128_pd(s, 1));
  return _mm_cvtsd_f64(t) + _mm_cvtsd_f64(_mm_unpackhi_pd(t, t));
}

inline __m256d code_mask(const std::uint8_t* codes, __m256i want) {
  std::int32_t packed;
  std::memcpy(&packed, codes, sizeof(packed));
  const __m256i wide = _mm256_cvtepu8_epi64(_mm_cvtsi32_si128(packed));
  return _mm256_castsi256_pd(_mm256_cmpeq_epi64(wide, want));
}

}  // namespace

double dot(const double* a, const double* b, std::size_t n) {
  __m256d lo = _mm256_setzero_pd();
  __m256d hi = _mm256_setzero_pd();
  const std::size_t blocked = n - n % kLanes;
  for (std::size_t i = 0; i < blocked; i += kLanes) {
    lo = _mm256_add_pd(lo, _mm256_mul_pd(_mm256_loadu_pd(a + i),
                                         _mm256_loadu_pd(b + i)));
    hi = _mm256_add_pd(hi, _mm256_mul_pd(_mm256_loadu_pd(a + i + 4),
                                         _mm256_loadu_pd(b + i + 4)));
  }
  double result = combine(lo, hi);
  for (std::size_t i = blocked; i < n; ++i) result += a[i] * b[i];
  return result;
}

void axpy(double alpha, const double* x, double* y, std::size_t n) {
  const __m256d va = _mm256_set1_pd(alpha);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d prod = _mm256_mul_pd(va, _mm256_loadu_pd(x + i));
    _mm256_storeu_pd(y + i, _mm256_add_pd(_mm256_loadu_pd(y + i), prod));
  }
  for (; i < n; ++i) y[i] += alpha * x[i];
}

void scale(double alpha, double* x, std::size_t n) {
  const __m256d va = _mm256_set1_pd(alpha);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(x + i, _mm256_mul_pd(_mm256_loadu_pd(x + i), va));
  }
  for (; i < n; ++i) x[i] *= alpha;
}

Sums group_sums(const double* h, const std::uint8_t* codes, std::size_t n) {
  const __m256i want_adv = _mm256_set1_epi64x(kGroupAdvantaged);
  const __m256i want_dis = _mm256_set1_epi64x(kGroupDisadvantaged);
  __m256d adv_lo = _mm256_setzero_pd();
  __m256d adv_hi = _mm256_setzero_pd();
  __m256d dis_lo = _mm256_setzero_pd();
  __m256d dis_hi = _mm256_setzero_pd();
  const std::size_t blocked = n - n % kLanes;
  for (std::size_t i = 0; i < blocked; i += kLanes) {
    const __m256d v_lo = _mm256_loadu_pd(h + i);
    const __m256d v_hi = _mm256_loadu_pd(h + i + 4);
    adv_lo = _mm256_add_pd(adv_lo,
                           _mm256_and_pd(v_lo, code_mask(codes + i, want_adv)));
    adv_hi = _mm256_add_pd(
        adv_hi, _mm256_and_pd(v_hi, code_mask(codes + i + 4, want_adv)));
    dis_lo = _mm256_add_pd(dis_lo,
                           _mm256_and_pd(v_lo, code_mask(codes + i, want_dis)));
    dis_hi = _mm256_add_pd(
        dis_hi, _mm256_and_pd(v_hi, code_mask(codes + i + 4, want_dis)));
  }
  Sums sums{combine(adv_lo, adv_hi), combine(dis_lo, dis_hi)};
  for (std::size_t i = blocked; i < n; ++i) {
    if (codes[i] == kGroupAdvantaged) sums.advantaged += h[i];
    if (codes[i] == kGroupDisadvantaged) sums.disadvantaged += h[i];
  }
  return sums;
}

}  // namespace fairquery::simd::avx2

#else

#include <stdexcept>

namespace fairquery::simd::avx2 {

double dot(const double*, const double*, std::size_t) {
  throw std::logic_error("AVX2 kernels are not built on this architecture");
}
void axpy(double, const double*, double*, std::size_t) {
  throw std::logic_error("AVX2 kernels are not built on this architecture");
}
void scale(double, double*, std::size_t) {
  throw std::logic_error("AVX2 kernels are not built on this architecture");
}
Sums group_sums(const double*, const std::uint8_t*, std::size_t) {
  throw std::logic_error("AVX2 kernels are not built on this architecture");
}

}  // namespace fairquery::simd::avx2

#endif
