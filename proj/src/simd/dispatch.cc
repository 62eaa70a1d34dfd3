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

#include <atomic>
#include <cstdlib>
#include <stdexcept>
#include <string>

#include "fairquery/simd/kernels.h"

namespace fairquery::simd {
namespace {

struct KernelTable {
  double (*dot)(const double*, const double*, std::size_t);
  void (*axpy)(double, const double*, double*, std::size_t);
  void (*scale)(double, double*, std::size_t);
  Sums (*group_sums)(const double*, const std::uint8_t*, std::size_t);
};

constexpr KernelTable kScalarTable{scalar::dot, scalar::axpy, scalar::scale,
                                   scalar::group_sums};
constexpr KernelTable kAvx2Table{avx2::dot, avx2::axpy, avx2::scale,
                                 avx2::group_sums};
constexpr KernelTable kNeonTable{neon::dot, neon::axpy, neon::scale,
                                 neon::group_sums};

const KernelTable& table_for(Backend backend) {
  switch (backend) {
    case Backend::kAvx2:
      return kAvx2Table;
    case Backend::kNeon:
      return kNeonTable;
    case Backend::kScalar:
      break;
  }
  return kScalarTable;
}

std::atomic<Backend>& current() {
  static std::atomic<Backend> backend{detect_backend()};
  return backend;
}

const KernelTable& active() { return table_for(current().load()); }

void check_sizes(std::size_t a, std::size_t b) {
  if (a != b) {
    throw std::invalid_argument("simd kernel: length mismatch " +
                                std::to_string(a) + " vs " + std::to_string(b));
  }
}

}  // namespace

std::string_view backend_name(Backend backend) {
  switch (backend) {
    case Backend::kAvx2:
      return "avx2";
    case Backend::kNeon:
      return "neon";
    case Backend::kScalar:
      break;
  }
  return "scalar";
}

bool backend_supported(Backend backend) {
  switch (backend) {
    case Backend::kScalar:
      return true;
    case Backend::kAvx2:
#if (defined(__x86_64__) || defined(_M_X64)) && \
    (defined(__GNUC__) || defined(__clang__))
      return __builtin_cpu_supports("avx2");
#else
      return false;
#endif
    case Backend::kNeon:
#if defined(__aarch64__)
      return true;
#else
      return false;
#endif
  }
  return false;
}

Backend detect_backend() {
  if (const char* env = std::getenv("FAIRQUERY_SIMD")) {
    const std::string want(env);
    for (Backend b : {Backend::kScalar, Backend::kAvx2, Backend::kNeon}) {
      if (want == backend_name(b)) {
        return backend_supported(b) ? b : Backend::kScalar;
      }
    }
  }
  if (backend_supported(Backend::kAvx2)) return Backend::kAvx2;
  if (backend_supported(Backend::kNeon)) return Backend::kNeon;
  return Backend::kScalar;
}

Backend active_backend() { return current().load(); }

Backend set_backend(Backend backend) {
  if (!backend_supported(backend)) {
    throw std::invalid_argument("simd backend not supported on this CPU: " +
                                std::string(backend_name(backend)));
  }
  return current().exchange(backend);
}

double dot(std::span<const double> a, std::span<const double> b) {
  check_sizes(a.size(), b.size());
  return active().dot(a.data(), b.data(), a.size());
}

void axpy(double alpha, std::span<const double> x, std::span<double> y) {
  check_sizes(x.size(), y.size());
  active().axpy(alpha, x.data(), y.data(), x.size());
}

void scale(double alpha, std::span<double> x) {
  active().scale(alpha, x.data(), x.size());
}

Sums group_sums(std::span<const double> h,
                std::span<const std::uint8_t> codes) {
  check_sizes(h.size(), codes.size());
  return active().group_sums(h.data(), codes.data(), h.size());
}

}  // namespace fairquery::simd
