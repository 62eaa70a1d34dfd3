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

#ifndef FAIRQUERY_SIMD_KERNELS_H_
#define FAIRQUERY_SIMD_KERNELS_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>

namespace fairquery::simd {

// Every reduction in this library uses one canonical order so that results
// are bit-identical across backends: indices are split into blocks of
// kLanes, lane l accumulates the elements with index % kLanes == l in
// ascending order, the lanes are combined as
//   ((l0 + l4) + (l2 + l6)) + ((l1 + l5) + (l3 + l7)),
// and the tail that does not fill a block is then added in ascending order.
// Products are never fused (no FMA).
inline constexpr std::size_t kLanes = 8;

enum class Backend { kScalar, kAvx2, kNeon };

std::string_view backend_name(Backend backend);

// Group codes understood by group_sums().
inline constexpr std::uint8_t kGroupDisadvantaged = 0;
inline constexpr std::uint8_t kGroupAdvantaged = 1;
inline constexpr std::uint8_t kGroupExcluded = 2;

struct Sums {
  double advantaged = 0.0;
  double disadvantaged = 0.0;
};

// Best backend the running CPU supports. FAIRQUERY_SIMD=scalar|avx2|neon in
// the environment overrides the choice (unsupported requests fall back to
// scalar).
Backend detect_backend();
bool backend_supported(Backend backend);

// Active backend for the dispatched entry points below.
Backend active_backend();
// Returns the previous backend. Throws if `backend` is not supported here.
Backend set_backend(Backend backend);

double dot(std::span<const double> a, std::span<const double> b);
// y += alpha * x
void axpy(double alpha, std::span<const double> x, std::span<double> y);
void scale(double alpha, std::span<double> x);
// Splits sum(h) by group code; kGroupExcluded entries are skipped.
Sums group_sums(std::span<const double> h, std::span<const std::uint8_t> codes);

// Per-backend entry points, exposed for equivalence tests and benchmarks.
namespace scalar {
double dot(const double* a, const double* b, std::size_t n);
void axpy(double alpha, const double* x, double* y, std::size_t n);
void scale(double alpha, double* x, std::size_t n);
Sums group_sums(const double* h, const std::uint8_t* codes, std::size_t n);
}  // namespace scalar

namespace avx2 {
double dot(const double* a, const double* b, std::size_t n);
void axpy(double alpha, const double* x, double* y, std::size_t n);
void scale(double alpha, double* x, std::size_t n);
Sums group_sums(const double* h, const std::uint8_t* codes, std::size_t n);
}  // namespace avx2

namespace neon {
double dot(const double* a, const double* b, std::size_t n);
void axpy(double alpha, const double* x, double* y, std::size_t n);
void scale(double alpha, double* x, std::size_t n);
Sums group_sums(const double* h, const std::uint8_t* codes, std::size_t n);
}  // namespace neon

}  // namespace fairquery::simd

#endif  // FAIRQUERY_SIMD_KERNELS_H_
