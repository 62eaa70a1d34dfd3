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

#include <cmath>
#include <cstring>
#include <stdexcept>
#include <vector>

#include <gtest/gtest.h>

#include "fairquery/rng.h"
#include "fairquery/simd/kernels.h"

namespace fairquery::simd {
namespace {

bool same_bits(double a, double b) {
  return std::memcmp(&a, &b, sizeof(double)) == 0;
}

struct Inputs {
  std::vector<double> a, b;
  std::vector<std::uint8_t> codes;
};

Inputs make_inputs(std::size_t n, std::uint64_t seed) {
  SplitMix64 rng(seed);
  Inputs in;
  for (std::size_t i = 0; i < n; ++i) {
    in.a.push_back(rng.uniform(-1e3, 1e3) * std::pow(10.0, rng.uniform(-8, 8)));
    in.b.push_back(rng.uniform(-1.0, 1.0));
    in.codes.push_back(static_cast<std::uint8_t>(rng.below(3)));
  }
  return in;
}

using DotFn = double (*)(const double*, const double*, std::size_t);
using AxpyFn = void (*)(double, const double*, double*, std::size_t);
using ScaleFn = void (*)(double, double*, std::size_t);
using SumsFn = Sums (*)(const double*, const std::uint8_t*, std::size_t);

struct Table {
  DotFn dot;
  AxpyFn axpy;
  ScaleFn scale;
  SumsFn sums;
};

void expect_bitwise_equal(const Table& ref, const Table& alt) {
  for (std::size_t n = 0; n <= 67; ++n) {
    SCOPED_TRACE("n = " + std::to_string(n));
    const Inputs in = make_inputs(n, 1000 + n);
    EXPECT_TRUE(same_bits(ref.dot(in.a.data(), in.b.data(), n),
                          alt.dot(in.a.data(), in.b.data(), n)));

    std::vector<double> y1 = in.b, y2 = in.b;
    ref.axpy(-0.3125, in.a.data(), y1.data(), n);
    alt.axpy(-0.3125, in.a.data(), y2.data(), n);
    for (std::size_t i = 0; i < n; ++i) EXPECT_TRUE(same_bits(y1[i], y2[i]));

    std::vector<double> x1 = in.a, x2 = in.a;
    ref.scale(1.0 / 3.0, x1.data(), n);
    alt.scale(1.0 / 3.0, x2.data(), n);
    for (std::size_t i = 0; i < n; ++i) EXPECT_TRUE(same_bits(x1[i], x2[i]));

    const Sums s1 = ref.sums(in.a.data(), in.codes.data(), n);
    const Sums s2 = alt.sums(in.a.data(), in.codes.data(), n);
    EXPECT_TRUE(same_bits(s1.advantaged, s2.advantaged));
    EXPECT_TRUE(same_bits(s1.disadvantaged, s2.disadvantaged));
  }
}

const Table kScalar{scalar::dot, scalar::axpy, scalar::scale,
                    scalar::group_sums};

TEST(SimdKernels, Avx2MatchesScalarBitwise) {
  if (!backend_supported(Backend::kAvx2)) GTEST_SKIP() << "no AVX2";
  expect_bitwise_equal(kScalar, {avx2::dot, avx2::axpy, avx2::scale,
                                 avx2::group_sums});
}

TEST(SimdKernels, NeonMatchesScalarBitwise) {
  if (!backend_supported(Backend::kNeon)) GTEST_SKIP() << "no NEON";
  expect_bitwise_equal(kScalar, {neon::dot, neon::axpy, neon::scale,
                                 neon::group_sums});
}

TEST(SimdKernels, DispatchedResultIndependentOfBackend) {
  const Inputs in = make_inputs(61, 7);
  const Backend original = active_backend();
  set_backend(Backend::kScalar);
  const double ref = dot(in.a, in.b);
  const Sums ref_sums = group_sums(in.a, in.codes);
  for (Backend b : {Backend::kAvx2, Backend::kNeon}) {
    if (!backend_supported(b)) continue;
    set_backend(b);
    EXPECT_TRUE(same_bits(ref, dot(in.a, in.b)));
    EXPECT_TRUE(same_bits(ref_sums.advantaged,
                          group_sums(in.a, in.codes).advantaged));
  }
  set_backend(original);
}

TEST(SimdKernels, ScalarDotCloseToExtendedPrecision) {
  for (std::size_t n : {1u, 7u, 8u, 9u, 64u, 1000u}) {
    const Inputs in = make_inputs(n, n);
    long double exact = 0.0L;
    long double mag = 0.0L;
    for (std::size_t i = 0; i < n; ++i) {
      exact += static_cast<long double>(in.a[i]) * in.b[i];
      mag += std::fabs(static_cast<long double>(in.a[i]) * in.b[i]);
    }
    EXPECT_NEAR(static_cast<double>(exact), scalar::dot(in.a.data(), in.b.data(), n),
                1e-13 * static_cast<double>(mag));
  }
}

TEST(SimdKernels, GroupSumsSplitsByCodeAndSkipsExcluded) {
  const std::vector<double> h{1, 2, 4, 8, 16, 32, 64, 128, 256, 512};
  const std::vector<std::uint8_t> codes{1, 0, 2, 1, 1, 0, 2, 2, 0, 1};
  const Sums s = group_sums(h, codes);
  EXPECT_EQ(s.advantaged, 1 + 8 + 16 + 512);
  EXPECT_EQ(s.disadvantaged, 2 + 32 + 256);
}

TEST(SimdKernels, LengthMismatchThrows) {
  std::vector<double> a(3), b(4);
  std::vector<std::uint8_t> c(2);
  EXPECT_THROW(dot(a, b), std::invalid_argument);
  EXPECT_THROW(axpy(1.0, a, b), std::invalid_argument);
  EXPECT_THROW(group_sums(a, c), std::invalid_argument);
}

TEST(SimdKernels, UnsupportedBackendIsRejected) {
  for (Backend b : {Backend::kAvx2, Backend::kNeon}) {
    if (backend_supported(b)) continue;
    EXPECT_THROW(set_backend(b), std::exception);
  }
  EXPECT_TRUE(backend_supported(Backend::kScalar));
}

}  // namespace
}  // namespace fairquery::simd
