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

#include "fairquery/privacy.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <string>
#include <vector>

#include "fairquery/error.h"

namespace fairquery {
namespace {

void require_epsilon(double epsilon) {
  if (!(epsilon > 0.0)) {
    throw Error(ErrorCode::kDomain,
                "epsilon must be > 0, got " + std::to_string(epsilon));
  }
}

void require_beta(double beta) {
  if (!(beta > 0.0)) {
    throw Error(ErrorCode::kDomain,
                "beta must be > 0, got " + std::to_string(beta));
  }
}

void require_fresh(const QueryBatch& batch) {
  if (batch.privatized) {
    throw Error(ErrorCode::kInvalidArgument, "batch is already privatized");
  }
}

bool operator<(const Rational& a, const Rational& b) {
  return static_cast<__int128>(a.num) * b.den <
         static_cast<__int128>(b.num) * a.den;
}

Rational operator-(const Rational& a, const Rational& b) {
  return Rational::make(a.num * b.den - b.num * a.den, a.den * b.den);
}

Rational abs(const Rational& r) { return {r.num < 0 ? -r.num : r.num, r.den}; }

// SP = lambda/N1 - mu/N0 for bit masks over n individuals.
Rational exact_parity(unsigned h, unsigned a, std::size_t n) {
  const unsigned all = (1u << n) - 1u;
  const std::int64_t n1 = std::popcount(a);
  const std::int64_t n0 = static_cast<std::int64_t>(n) - n1;
  const std::int64_t lambda = std::popcount(h & a);
  const std::int64_t mu = std::popcount(h & (all & ~a));
  return Rational::make(lambda * n0 - mu * n1, n1 * n0);
}

// Noise vector of standard samples drawn from one seeded stream.
template <typename Quantile>
std::vector<double> standard_noise(std::size_t m, std::uint64_t seed,
                                   Quantile quantile) {
  SplitMix64 rng(seed);
  std::vector<double> z(m);
  for (double& v : z) v = quantile(rng.uniform_open());
  return z;
}

// The sensitivity formulas are stated with the disadvantaged group as the
// smaller one; SP is antisymmetric in the group labels, so the bound for the
// swapped labelling is the same.
Population ordered(const Population& pop) {
  Population p = pop;
  if (p.n0 > p.n1) std::swap(p.n0, p.n1);
  return p;
}

}  // namespace

// ---------------------------------------------------------------------------

SensitivityBound global_sensitivity(Metric metric, std::size_t m,
                                    std::size_t n) {
  if (m < 1) throw Error(ErrorCode::kDomain, "global sensitivity needs m >= 1");
  SensitivityBound out;
  out.kind = SensitivityKind::kGlobal;
  out.metric = metric;
  out.m = m;
  out.n = n;
  const double md = static_cast<double>(m);
  if (is_absolute(metric)) {
    if (n < 2) {
      throw Error(ErrorCode::kDomain,
                  "absolute-metric sensitivity needs n >= 2, got " +
                      std::to_string(n));
    }
    out.value = md / 2.0;
  } else {
    if (n < 3) {
      throw Error(ErrorCode::kDomain,
                  "SP/EO sensitivity needs n >= 3, got " + std::to_string(n));
    }
    out.value = md / 2.0 + md / static_cast<double>(n - 1);
  }
  return out;
}

Rational Rational::make(std::int64_t num, std::int64_t den) {
  if (den == 0) throw Error(ErrorCode::kDomain, "zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  const std::int64_t g = std::gcd(num < 0 ? -num : num, den);
  return {num / g, den / g};
}

Rational brute_force_global_exact(Metric metric, std::size_t n) {
  if (n > 8 || n < 2) {
    throw Error(ErrorCode::kDomain,
                "brute-force enumeration supports 2 <= n <= 8, got " +
                    std::to_string(n));
  }
  const bool absolute = is_absolute(metric);
  const unsigned full = (1u << n) - 1u;
  Rational best{0, 1};
  for (unsigned h = 0; h <= full; ++h) {
    for (unsigned a = 1; a < full; ++a) {  // both groups nonempty
      const Rational sp = exact_parity(h, a, n);
      for (std::size_t j = 0; j < n; ++j) {
        const unsigned flipped = a ^ (1u << j);
        if (flipped == 0 || flipped == full) continue;
        const Rational sp2 = exact_parity(h, flipped, n);
        const Rational diff = absolute ? fairquery::abs(abs(sp) - abs(sp2))
                                       : abs(sp - sp2);
        if (best < diff) best = diff;
      }
    }
  }
  return best;
}

double brute_force_global(Metric metric, std::size_t n) {
  return brute_force_global_exact(metric, n).value();
}

SensitivityBound smooth_sensitivity_sp(std::size_t m, std::size_t n,
                                       std::size_t n0, std::size_t n1,
                                       double beta) {
  require_beta(beta);
  if (n0 < 2) {
    throw Error(ErrorCode::kDomain,
                "smooth sensitivity needs N0 >= 2, got " + std::to_string(n0));
  }
  if (n0 > n1 || n0 + n1 != n) {
    throw Error(ErrorCode::kDomain,
                "smooth sensitivity needs N0 <= N1 and N0 + N1 = n (N0 = " +
                    std::to_string(n0) + ", N1 = " + std::to_string(n1) +
                    ", n = " + std::to_string(n) + ")");
  }
  const double md = static_cast<double>(m);
  const double local = md / static_cast<double>(n1 + 1) +
                       md / static_cast<double>(n0);
  const double far = std::exp(-static_cast<double>(n0 - 2) * beta) *
                     (md / static_cast<double>(n - 1) + md / 2.0);
  SensitivityBound out;
  out.value = std::max(local, far);
  out.kind = SensitivityKind::kSmooth;
  out.metric = Metric::kSp;
  out.m = m;
  out.n = n;
  out.n0 = n0;
  out.n1 = n1;
  out.beta = beta;
  return out;
}

SensitivityBound smooth_sensitivity_abs_sp(std::size_t m, std::size_t n0,
                                           double beta) {
  require_beta(beta);
  if (n0 < 2) {
    throw Error(ErrorCode::kDomain,
                "smooth sensitivity needs N0 >= 2, got " + std::to_string(n0));
  }
  const double md = static_cast<double>(m);
  const double local = md / static_cast<double>(n0);
  const double far = md * std::exp(-static_cast<double>(n0 - 2) * beta) / 2.0;
  SensitivityBound out;
  out.value = std::max(local, far);
  out.kind = SensitivityKind::kSmooth;
  out.metric = Metric::kAbsSp;
  out.m = m;
  out.n0 = n0;
  out.beta = beta;
  return out;
}

double brute_force_smooth(Metric metric, std::size_t m, std::size_t n,
                          std::size_t n0, double beta) {
  require_beta(beta);
  if (n0 < 2) {
    throw Error(ErrorCode::kDomain,
                "smooth sensitivity needs N0 >= 2, got " + std::to_string(n0));
  }
  const bool absolute = is_absolute(metric);
  if (!absolute && (n0 > n || n - n0 < n0)) {
    throw Error(ErrorCode::kDomain, "smooth sensitivity needs N0 <= N1");
  }
  const std::size_t n1 = absolute ? 0 : n - n0;
  const double md = static_cast<double>(m);
  double best = 0.0;
  for (std::size_t k = 0; k + 2 <= n0; ++k) {
    const double damp = std::exp(-static_cast<double>(k) * beta);
    const double term =
        absolute ? md * damp / static_cast<double>(n0 - k)
                 : damp * (md / static_cast<double>(n1 + k + 1) +
                           md / static_cast<double>(n0 - k));
    best = std::max(best, term);
  }
  return best;
}

double cauchy_beta(double epsilon, std::size_t m) {
  return epsilon / (6.0 * static_cast<double>(m));
}

double laplace_smooth_beta(double epsilon, double delta, std::size_t m) {
  return epsilon / (4.0 * (static_cast<double>(m) + std::log(2.0 / delta)));
}

// ---------------------------------------------------------------------------

double laplace_from_uniform(double u) {
  const double c = u - 0.5;
  const double mag = -std::log1p(-2.0 * std::abs(c));
  return c < 0.0 ? -mag : mag;
}

double cauchy_from_uniform(double u) {
  if (u == 0.5) return 0.0;
  return std::tan(std::numbers::pi * (u - 0.5));
}

double sample_laplace(SplitMix64& rng, double scale) {
  return scale * laplace_from_uniform(rng.uniform_open());
}

double sample_cauchy(SplitMix64& rng, double scale) {
  return scale * cauchy_from_uniform(rng.uniform_open());
}

// ---------------------------------------------------------------------------

QueryBatch add_noise(const QueryBatch& batch, double scale,
                     std::span<const double> z, Mechanism mechanism) {
  if (z.size() != batch.values.size()) {
    throw Error(ErrorCode::kInvalidArgument, "noise length mismatch");
  }
  QueryBatch out = batch;
  out.privatized = true;
  out.mechanism = mechanism;
  if (scale != 0.0) {
    for (std::size_t i = 0; i < z.size(); ++i) out.values[i] += scale * z[i];
  }
  return out;
}

double laplace_global_scale(Metric metric, std::size_t m, std::size_t n,
                            double epsilon) {
  require_epsilon(epsilon);
  if (std::isinf(epsilon)) return 0.0;
  return global_sensitivity(metric, m, n).value / epsilon;
}

double cauchy_smooth_scale(Metric metric, std::size_t m, const Population& pop,
                           double epsilon) {
  require_epsilon(epsilon);
  if (std::isinf(epsilon)) return 0.0;
  const Population p = ordered(pop);
  const double beta = cauchy_beta(epsilon, m);
  const double ds =
      is_absolute(metric)
          ? smooth_sensitivity_abs_sp(m, p.n0, beta).value
          : smooth_sensitivity_sp(m, p.n, p.n0, p.n1, beta).value;
  return 6.0 * ds / epsilon;
}

double laplace_smooth_scale(std::size_t m, const Population& pop,
                            double epsilon, double delta) {
  require_epsilon(epsilon);
  if (!(delta > 0.0 && delta < 1.0)) {
    throw Error(ErrorCode::kDomain,
                "delta must lie in (0, 1), got " + std::to_string(delta));
  }
  if (std::isinf(epsilon)) return 0.0;
  const Population p = ordered(pop);
  const double beta = laplace_smooth_beta(epsilon, delta, m);
  return 2.0 * smooth_sensitivity_sp(m, p.n, p.n0, p.n1, beta).value / epsilon;
}

QueryBatch laplace_global_mechanism(const QueryBatch& batch, std::size_t n,
                                    double epsilon, std::uint64_t seed) {
  require_fresh(batch);
  const std::size_t m = batch.values.size();
  const double scale =
      m == 0 ? 0.0 : laplace_global_scale(batch.metric, m, n, epsilon);
  QueryBatch out =
      add_noise(batch, scale, standard_noise(m, seed, laplace_from_uniform),
                Mechanism::kLaplaceGlobal);
  out.epsilon = epsilon;
  return out;
}

QueryBatch conceal_sp_cauchy(const QueryBatch& batch, const Population& pop,
                             double epsilon, std::uint64_t seed) {
  require_fresh(batch);
  if (batch.metric != Metric::kSp && batch.metric != Metric::kEo) {
    throw Error(ErrorCode::kInvalidArgument,
                "conceal_sp_cauchy expects an SP or EO batch");
  }
  const std::size_t m = batch.values.size();
  const double scale =
      m == 0 ? 0.0 : cauchy_smooth_scale(batch.metric, m, pop, epsilon);
  QueryBatch out =
      add_noise(batch, scale, standard_noise(m, seed, cauchy_from_uniform),
                Mechanism::kCauchySmooth);
  out.epsilon = epsilon;
  return out;
}

QueryBatch conceal_sp_laplace_smooth(const QueryBatch& batch,
                                     const Population& pop, double epsilon,
                                     double delta, std::uint64_t seed) {
  require_fresh(batch);
  if (batch.metric != Metric::kSp && batch.metric != Metric::kEo) {
    throw Error(ErrorCode::kInvalidArgument,
                "conceal_sp_laplace_smooth expects an SP or EO batch");
  }
  const std::size_t m = batch.values.size();
  const double scale =
      m == 0 ? 0.0 : laplace_smooth_scale(m, pop, epsilon, delta);
  QueryBatch out =
      add_noise(batch, scale, standard_noise(m, seed, laplace_from_uniform),
                Mechanism::kLaplaceSmooth);
  out.epsilon = epsilon;
  out.delta = delta;
  out.outside_theorem_range = epsilon >= 1.0;
  return out;
}

QueryBatch conceal_abs_sp(const QueryBatch& batch, std::size_t n0,
                          double epsilon, std::uint64_t seed) {
  require_fresh(batch);
  if (!is_absolute(batch.metric)) {
    throw Error(ErrorCode::kInvalidArgument,
                "conceal_abs_sp expects an ABS_SP or ABS_EO batch");
  }
  const std::size_t m = batch.values.size();
  const double scale =
      m == 0 ? 0.0
             : cauchy_smooth_scale(batch.metric, m, Population{0, n0, n0},
                                   epsilon);
  QueryBatch out =
      add_noise(batch, scale, standard_noise(m, seed, cauchy_from_uniform),
                Mechanism::kCauchySmooth);
  out.epsilon = epsilon;
  return out;
}

QueryBatch privatize(const QueryBatch& batch, Mechanism mechanism,
                     const Population& pop, double epsilon,
                     std::optional<double> delta, std::uint64_t seed) {
  switch (mechanism) {
    case Mechanism::kNone:
      return batch;
    case Mechanism::kLaplaceGlobal:
      return laplace_global_mechanism(batch, pop.n, epsilon, seed);
    case Mechanism::kCauchySmooth:
      if (is_absolute(batch.metric)) {
        return conceal_abs_sp(batch, std::min(pop.n0, pop.n1), epsilon, seed);
      }
      return conceal_sp_cauchy(batch, pop, epsilon, seed);
    case Mechanism::kLaplaceSmooth:
      if (!delta) {
        throw Error(ErrorCode::kInvalidArgument,
                    "laplace_smooth needs a delta");
      }
      if (is_absolute(batch.metric)) {
        throw Error(ErrorCode::kInvalidArgument,
                    "laplace_smooth is only defined for SP/EO batches");
      }
      return conceal_sp_laplace_smooth(batch, pop, epsilon, *delta, seed);
  }
  return batch;
}

double mechanism_scale(Mechanism mechanism, Metric metric, std::size_t m,
                       const Population& pop, double epsilon,
                       std::optional<double> delta) {
  if (m == 0) return 0.0;
  switch (mechanism) {
    case Mechanism::kNone:
      return 0.0;
    case Mechanism::kLaplaceGlobal:
      return laplace_global_scale(metric, m, pop.n, epsilon);
    case Mechanism::kCauchySmooth:
      return cauchy_smooth_scale(metric, m, pop, epsilon);
    case Mechanism::kLaplaceSmooth:
      return laplace_smooth_scale(m, pop, epsilon, delta.value_or(1e-6));
  }
  return 0.0;
}

double median_abs_noise(Mechanism mechanism, double scale) {
  switch (mechanism) {
    case Mechanism::kLaplaceGlobal:
    case Mechanism::kLaplaceSmooth:
      return scale * std::numbers::ln2;
    case Mechanism::kCauchySmooth:
      return scale;
    case Mechanism::kNone:
      break;
  }
  return 0.0;
}

}  // namespace fairquery
