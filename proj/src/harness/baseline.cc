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

#include "fairquery/harness/baseline.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "fairquery/error.h"
#include "fairquery/simd/kernels.h"

namespace fairquery {
namespace {

double sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

// log(1 + e^{-|z|}) + max(z, 0) - y z.
double log_loss(double z, double y) {
  return std::log1p(std::exp(-std::abs(z))) + std::max(z, 0.0) - y * z;
}

Matrix standardize(const Matrix& x) {
  Matrix out = x;
  const std::size_t n = x.rows();
  const std::size_t d = x.cols();
  for (std::size_t k = 0; k < d; ++k) {
    double mean = 0.0;
    for (std::size_t i = 0; i < n; ++i) mean += x(i, k);
    mean /= static_cast<double>(n);
    double var = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      var += (x(i, k) - mean) * (x(i, k) - mean);
    }
    const double sd = std::sqrt(var / static_cast<double>(n));
    for (std::size_t i = 0; i < n; ++i) {
      out(i, k) = sd > 0.0 ? (x(i, k) - mean) / sd : 0.0;
    }
  }
  return out;
}

}  // namespace

std::vector<double> train_baseline(const Matrix& features,
                                   std::span<const std::uint8_t> y,
                                   const BaselineOptions& options) {
  const std::size_t n = features.rows();
  const std::size_t d = features.cols();
  if (y.size() != n) {
    throw Error(ErrorCode::kInvalidArgument,
                "baseline: " + std::to_string(n) + " feature rows vs " +
                    std::to_string(y.size()) + " labels");
  }
  if (n == 0) throw Error(ErrorCode::kInvalidArgument, "baseline: no rows");
  for (double v : features.data()) {
    if (!std::isfinite(v)) {
      throw Error(ErrorCode::kInvalidArgument,
                  "baseline: features must be finite");
    }
  }
  for (std::uint8_t v : y) {
    if (v > 1) {
      throw Error(ErrorCode::kInvalidArgument, "baseline: labels must be 0/1");
    }
  }

  const Matrix x = standardize(features);
  std::vector<double> w(d, 0.0);
  double bias = 0.0;
  std::vector<double> z(n);
  std::vector<double> grad(d);
  const double inv_n = 1.0 / static_cast<double>(n);

  for (std::size_t epoch = 0; epoch < options.epochs; ++epoch) {
    std::fill(grad.begin(), grad.end(), 0.0);
    double grad_bias = 0.0;
    double loss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double zi = simd::dot(x.row(i), w) + bias;
      const double yi = static_cast<double>(y[i]);
      loss += log_loss(zi, yi);
      const double r = sigmoid(zi) - yi;
      simd::axpy(r, x.row(i), grad);
      grad_bias += r;
    }
    if (!std::isfinite(loss)) {
      throw Error(ErrorCode::kDivergence,
                  "baseline loss became non-finite at epoch " +
                      std::to_string(epoch));
    }
    simd::axpy(-options.lr * inv_n, grad, w);
    bias -= options.lr * inv_n * grad_bias;
  }

  std::vector<double> scores(n);
  for (std::size_t i = 0; i < n; ++i) {
    scores[i] = sigmoid(simd::dot(x.row(i), w) + bias);
  }
  return scores;
}

}  // namespace fairquery
