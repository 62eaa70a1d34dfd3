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

#ifndef FAIRQUERY_PRIVACY_H_
#define FAIRQUERY_PRIVACY_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>

#include "fairquery/fairness.h"
#include "fairquery/rng.h"

namespace fairquery {

enum class SensitivityKind { kGlobal, kSmooth };

struct SensitivityBound {
  double value = 0.0;
  SensitivityKind kind = SensitivityKind::kGlobal;
  Metric metric = Metric::kSp;
  std::size_t m = 0;
  std::size_t n = 0;
  std::optional<std::size_t> n0;
  std::optional<std::size_t> n1;
  std::optional<double> beta;
  std::optional<double> epsilon;
  std::optional<double> delta;
};

// ---------------------------------------------------------------------------
// Sensitivities
// ---------------------------------------------------------------------------

// l1 global sensitivity of m stacked queries:
//   SP, EO:  m/2 + m/(n-1)   (n >= 3; pass the positive count for EO)
//   ABS_SP, ABS_EO:  m/2     (n >= 2)
SensitivityBound global_sensitivity(Metric metric, std::size_t m,
                                    std::size_t n);

// Exact rational number with 64-bit parts, used by the enumeration oracle.
struct Rational {
  std::int64_t num = 0;
  std::int64_t den = 1;

  static Rational make(std::int64_t num, std::int64_t den);
  double value() const { return double(num) / double(den); }
  friend bool operator==(const Rational&, const Rational&) = default;
};

// Maximum single-model change |f(S,h) - f(S',h)| over every binary h, every
// attribute vector with both groups nonempty, and every single attribute flip
// that keeps both groups nonempty. n <= 8; kDomain otherwise.
// Accepts SP and ABS_SP (EO reduces to SP on the y = 1 subpopulation).
Rational brute_force_global_exact(Metric metric, std::size_t n);
double brute_force_global(Metric metric, std::size_t n);

// max( m/(n1+1) + m/n0 , e^{-(n0-2) beta} (m/(n-1) + m/2) ).
// Requires 2 <= n0 <= n1, n0 + n1 = n, beta > 0.
SensitivityBound smooth_sensitivity_sp(std::size_t m, std::size_t n,
                                       std::size_t n0, std::size_t n1,
                                       double beta);

// max( m/n0 , m e^{-(n0-2) beta} / 2 ). Requires n0 >= 2, beta > 0.
SensitivityBound smooth_sensitivity_abs_sp(std::size_t m, std::size_t n0,
                                           double beta);

// Sweeps k = 0..n0-2 over the distance-k local sensitivity, damped by
// e^{-k beta}: m/(N1+k+1) + m/(N0-k) for SP, m/(N0-k) for ABS_SP.
// `n` is only used for SP (N1 = n - n0).
double brute_force_smooth(Metric metric, std::size_t m, std::size_t n,
                          std::size_t n0, double beta);

// beta for the Cauchy mechanism: epsilon / (6 m).
double cauchy_beta(double epsilon, std::size_t m);
// beta for the (epsilon, delta) Laplace mechanism: epsilon / (4 (m + ln(2/delta))).
double laplace_smooth_beta(double epsilon, double delta, std::size_t m);

// ---------------------------------------------------------------------------
// Samplers (inverse CDF on an open-interval uniform)
// ---------------------------------------------------------------------------

// Standard Laplace quantile for u in (0,1): -sgn(u-1/2) ln(1 - 2|u-1/2|).
double laplace_from_uniform(double u);
// Standard Cauchy quantile: tan(pi (u - 1/2)).
double cauchy_from_uniform(double u);

double sample_laplace(SplitMix64& rng, double scale);
double sample_cauchy(SplitMix64& rng, double scale);

// ---------------------------------------------------------------------------
// Mechanisms. All release raw (unclipped) values and are deterministic in
// (inputs, seed).
// ---------------------------------------------------------------------------

// Group sizes of the population the queries are computed over. For EO
// batches these are the y = 1 counts.
struct Population {
  std::size_t n = 0;
  std::size_t n0 = 0;
  std::size_t n1 = 0;
};

// Adds `scale * z[i]` to every value and stamps the mechanism metadata.
QueryBatch add_noise(const QueryBatch& batch, double scale,
                     std::span<const double> z, Mechanism mechanism);

// Noise scales used by the mechanisms below.
double laplace_global_scale(Metric metric, std::size_t m, std::size_t n,
                            double epsilon);
double cauchy_smooth_scale(Metric metric, std::size_t m, const Population& pop,
                           double epsilon);
double laplace_smooth_scale(std::size_t m, const Population& pop,
                            double epsilon, double delta);

// sigma_i ~ Lap(Delta / epsilon). epsilon = +inf returns the batch
// unchanged (still flagged privatized).
QueryBatch laplace_global_mechanism(const QueryBatch& batch, std::size_t n,
                                    double epsilon, std::uint64_t seed);

// SP (or EO on the positive population) + (6 dS / epsilon) Z, Z standard
// Cauchy, beta = epsilon / (6 m).
QueryBatch conceal_sp_cauchy(const QueryBatch& batch, const Population& pop,
                             double epsilon, std::uint64_t seed);

// SP + (2 dS / epsilon) Z, Z standard Laplace,
// beta = epsilon / (4 (m + ln(2/delta))). epsilon >= 1 is allowed but flagged.
QueryBatch conceal_sp_laplace_smooth(const QueryBatch& batch,
                                     const Population& pop, double epsilon,
                                     double delta, std::uint64_t seed);

// |SP| + (6 dS_|SP| / epsilon) Z, Z standard Cauchy, beta = epsilon / (6 m).
QueryBatch conceal_abs_sp(const QueryBatch& batch, std::size_t n0,
                          double epsilon, std::uint64_t seed);

// Dispatches on `mechanism`; kNone returns the batch unchanged.
QueryBatch privatize(const QueryBatch& batch, Mechanism mechanism,
                     const Population& pop, double epsilon,
                     std::optional<double> delta, std::uint64_t seed);

// Per-coordinate noise scale of `mechanism` (0 for kNone or infinite epsilon).
double mechanism_scale(Mechanism mechanism, Metric metric, std::size_t m,
                       const Population& pop, double epsilon,
                       std::optional<double> delta);

// Median of |noise| per coordinate: scale for Cauchy, scale * ln 2 for
// Laplace.
double median_abs_noise(Mechanism mechanism, double scale);

}  // namespace fairquery

#endif  // FAIRQUERY_PRIVACY_H_
