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

#include <array>

#include "fairquery/simd/kernels.h"

namespace fairquery::simd::scalar {
namespace {

using Lanes = std::array<double, kLanes>;

double combine(const Lanes& l) {
  return ((l[0] + l[4]) + (l[2] + l[6])) + ((l[1] + l[5]) + (l[3] + l[7]));
}

}  // namespace

double dot(const double* a, const double* b, std::size_t n) {
  Lanes acc{};
  const std::size_t blocked = n - n % kLanes;
  for (std::size_t i = 0; i < blocked; i += kLanes) {
    for (std::size_t l = 0; l < kLanes; ++l) acc[l] += a[i + l] * b[i + l];
  }
  double result = combine(acc);
  for (std::size_t i = blocked; i < n; ++i) result += a[i] * b[i];
  return result;
}

void axpy(double alpha, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

void scale(double alpha, double* x, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) x[i] *= alpha;
}

Sums group_sums(const double* h, const std::uint8_t* codes, std::size_t n) {
  Lanes adv{};
  Lanes dis{};
  const std::size_t blocked = n - n % kLanes;
  for (std::size_t i = 0; i < blocked; i += kLanes) {
    for (std::size_t l = 0; l < kLanes; ++l) {
      const double v = h[i + l];
      const std::uint8_t c = codes[i + l];
      // Adding an explicit 0.0 keeps the lane arithmetic identical to the
      // masked vector version.
      adv[l] += c == kGroupAdvantaged ? v : 0.0;
      dis[l] += c == kGroupDisadvantaged ? v : 0.0;
    }
  }
  Sums sums{combine(adv), combine(dis)};
  for (std::size_t i = blocked; i < n; ++i) {
    if (codes[i] == kGroupAdvantaged) sums.advantaged += h[i];
    if (codes[i] == kGroupDisadvantaged) sums.disadvantaged += h[i];
  }
  return sums;
}

}  // namespace fairquery::simd::scalar
