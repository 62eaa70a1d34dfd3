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

#include "fairquery/simd/kernels.h"

#if defined(__aarch64__)
#include <arm_neon.h>

namespace fairquery::simd::neon {
namespace {

// r0..r3 hold lanes {0,1} {2,3} {4,5} {6,7} of the canonical order.
inline double combine(float64x2_t r0, float64x2_t r1, float64x2_t r2,
                      float64x2_t r3) {
  const float64x2_t a = vaddq_f64(r0, r2);  // l0+l4, l1+l5
  const float64x2_t b = vaddq_f64(r1, r3);  // l2+l6, l3+l7
  const float64x2_t t = vaddq_f64(a, b);
  return vgetq_lane_f64(t, 0) + vgetq_lane_f64(t, 1);
}

inline float64x2_t masked(const double* h, const std::uint8_t* codes,
                          std::uint8_t want) {
  const uint64x2_t m = {codes[0] == want ? ~0ULL : 0ULL,
                        codes[1] == want ? ~0ULL : 0ULL};
  return vreinterpretq_f64_u64(
      vandq_u64(vreinterpretq_u64_f64(vld1q_f64(h)), m));
}

}  // namespace

double dot(const double* a, const double* b, std::size_t n) {
  float64x2_t r[4] = {vdupq_n_f64(0.0), vdupq_n_f64(0.0), vdupq_n_f64(0.0),
                      vdupq_n_f64(0.0)};
  const std::size_t blocked = n - n % kLanes;
  for (std::size_t i = 0; i < blocked; i += kLanes) {
    for (int k = 0; k < 4; ++k) {
      r[k] = vaddq_f64(r[k], vmulq_f64(vld1q_f64(a + i + 2 * k),
                                       vld1q_f64(b + i + 2 * k)));
    }
  }
  double result = combine(r[0], r[1], r[2], r[3]);
  for (std::size_t i = blocked; i < n; ++i) result += a[i] * b[i];
  return result;
}

void axpy(double alpha, const double* x, double* y, std::size_t n) {
  const float64x2_t va = vdupq_n_f64(alpha);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    vst1q_f64(y + i, vaddq_f64(vld1q_f64(y + i), vmulq_f64(va, vld1q_f64(x + i))));
  }
  for (; i < n; ++i) y[i] += alpha * x[i];
}

void scale(double alpha, double* x, std::size_t n) {
  const float64x2_t va = vdupq_n_f64(alpha);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) vst1q_f64(x + i, vmulq_f64(vld1q_f64(x + i), va));
  for (; i < n; ++i) x[i] *= alpha;
}

Sums group_sums(const double* h, const std::uint8_t* codes, std::size_t n) {
  float64x2_t adv[4];
  float64x2_t dis[4];
  for (int k = 0; k < 4; ++k) adv[k] = dis[k] = vdupq_n_f64(0.0);
  const std::size_t blocked = n - n % kLanes;
  for (std::size_t i = 0; i < blocked; i += kLanes) {
    for (int k = 0; k < 4; ++k) {
      const std::size_t j = i + 2 * k;
      adv[k] = vaddq_f64(adv[k], masked(h + j, codes + j, kGroupAdvantaged));
      dis[k] = vaddq_f64(dis[k], masked(h + j, codes + j, kGroupDisadvantaged));
    }
  }
  Sums sums{combine(adv[0], adv[1], adv[2], adv[3]),
            combine(dis[0], dis[1], dis[2], dis[3])};
  for (std::size_t i = blocked; i < n; ++i) {
    if (codes[i] == kGroupAdvantaged) sums.advantaged += h[i];
    if (codes[i] == kGroupDisadvantaged) sums.disadvantaged += h[i];
  }
  return sums;
}

}  // namespace fairquery::simd::neon

#else

#include <stdexcept>

namespace fairquery::simd::neon {

double dot(const double*, const double*, std::size_t) {
  throw std::logic_error("NEON kernels are not built on this architecture");
}
void axpy(double, const double*, double*, std::size_t) {
  throw std::logic_error("NEON kernels are not built on this architecture");
}
void scale(double, double*, std::size_t) {
  throw std::logic_error("NEON kernels are not built on this architecture");
}
Sums group_sums(const double*, const std::uint8_t*, std::size_t) {
  throw std::logic_error("NEON kernels are not built on this architecture");
}

}  // namespace fairquery::simd::neon

#endif
