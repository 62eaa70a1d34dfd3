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

#include "fairquery/sparse_solver.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "fairquery/error.h"
#include "fairquery/simd/kernels.h"
#include "simplex.h"

namespace fairquery {
namespace {

// Relative threshold on |R_kk| against the largest column norm.
constexpr double kRankTol = 1e-10;

// Householder least squares on a column-major copy (`cols` holds one column
// of H per row). On a vanishing pivot returns an empty vector and sets
// `failed_column`.
std::vector<double> householder_solve(Matrix cols, std::vector<double> b,
                                      std::size_t* failed_column) {
  const std::size_t n = cols.rows();
  double max_norm = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    max_norm = std::max(max_norm, norm2(cols.row(j)));
  }
  std::vector<double> diag(n);
  std::vector<double> v;
  for (std::size_t k = 0; k < n; ++k) {
    auto ck = cols.row(k).subspan(k);
    const double alpha = norm2(ck);
    if (alpha <= kRankTol * max_norm || max_norm == 0.0) {
      *failed_column = k;
      return {};
    }
    const double rkk = ck[0] > 0.0 ? -alpha : alpha;
    v.assign(ck.begin(), ck.end());
    v[0] -= rkk;
    const double vv = simd::dot(v, v);
    for (std::size_t j = k + 1; j < n; ++j) {
      auto cj = cols.row(j).subspan(k);
      simd::axpy(-2.0 * simd::dot(v, cj) / vv, v, cj);
    }
    auto bk = std::span<double>(b).subspan(k);
    simd::axpy(-2.0 * simd::dot(v, bk) / vv, v, bk);
    diag[k] = rkk;
  }
  std::vector<double> x(n);
  for (std::size_t k = n; k-- > 0;) {
    double acc = b[k];
    for (std::size_t j = k + 1; j < n; ++j) acc -= cols(j, k) * x[j];
    x[k] = acc / diag[k];
  }
  return x;
}

}  // namespace

void LinearSystem::validate() const {
  if (rhs.size() != matrix.rows()) {
    throw Error(ErrorCode::kInvalidArgument,
                "rhs has length " + std::to_string(rhs.size()) + " for " +
                    std::to_string(matrix.rows()) + " rows");
  }
  for (double v : matrix.data()) {
    if (!std::isfinite(v)) {
      throw Error(ErrorCode::kInvalidArgument, "matrix has a non-finite entry");
    }
  }
  for (double v : rhs) {
    if (!std::isfinite(v)) {
      throw Error(ErrorCode::kInvalidArgument, "rhs has a non-finite entry");
    }
  }
}

std::vector<double> solve_full_rank(const LinearSystem& sys) {
  sys.validate();
  const std::size_t m = sys.matrix.rows();
  const std::size_t n = sys.matrix.cols();
  if (m < n) {
    throw Error(ErrorCode::kRankDeficient,
                "system has " + std::to_string(m) + " rows for " +
                    std::to_string(n) + " unknowns; rank " +
                    std::to_string(n) + " is impossible");
  }
  std::size_t failed = 0;
  std::vector<double> x =
      householder_solve(sys.matrix.transposed(), sys.rhs, &failed);
  if (x.empty() && n > 0) {
    throw Error(ErrorCode::kRankDeficient,
                "rank deficient: pivot of column " + std::to_string(failed) +
                    " vanished");
  }
  return x;
}

SparseSolution make_solution(const LinearSystem& sys, std::vector<double> s,
                             double support_tol) {
  SparseSolution out;
  std::vector<double> r = multiply(sys.matrix, s);
  for (std::size_t i = 0; i < r.size(); ++i) r[i] -= sys.rhs[i];
  out.residual_norm = norm2(r);
  for (std::size_t j = 0; j < s.size(); ++j) {
    if (std::abs(s[j]) > support_tol) out.support.push_back(j);
  }
  out.s = std::move(s);
  return out;
}

SparseSolution basis_pursuit(const LinearSystem& sys,
                             const SolverOptions& options) {
  sys.validate();
  const std::size_t m = sys.matrix.rows();
  const std::size_t n = sys.matrix.cols();
  if (m == 0) return make_solution(sys, std::vector<double>(n, 0.0),
                                   options.support_tol);

  const double half_width = options.eq_tol / (2.0 * std::sqrt(double(m)));
  internal::LpProblem lp;
  lp.a = Matrix(2 * m, 2 * n);
  lp.b.resize(2 * m);
  lp.c.assign(2 * n, 1.0);
  for (std::size_t i = 0; i < m; ++i) {
    const auto h = sys.matrix.row(i);
    auto upper = lp.a.row(i);
    auto lower = lp.a.row(m + i);
    for (std::size_t j = 0; j < n; ++j) {
      upper[j] = h[j];
      upper[n + j] = -h[j];
      lower[j] = -h[j];
      lower[n + j] = h[j];
    }
    lp.b[i] = sys.rhs[i] + half_width;
    lp.b[m + i] = -sys.rhs[i] + half_width;
  }
  internal::LpOptions lp_options;
  lp_options.max_iter = options.max_iter.value_or(10 * (m + n));
  const internal::LpResult res = internal::solve_lp(lp, lp_options);

  std::vector<double> s(n);
  for (std::size_t j = 0; j < n; ++j) s[j] = res.x[j] - res.x[n + j];
  SparseSolution out = make_solution(sys, std::move(s), options.support_tol);
  out.iterations = res.iterations;
  if (out.residual_norm > options.eq_tol) {
    throw Error(ErrorCode::kInfeasible,
                "basis pursuit residual " + std::to_string(out.residual_norm) +
                    " exceeds eq_tol " + std::to_string(options.eq_tol));
  }
  return out;
}

SparseSolution omp(const LinearSystem& sys, std::size_t sparsity,
                   const SolverOptions& options) {
  sys.validate();
  const std::size_t m = sys.matrix.rows();
  const std::size_t n = sys.matrix.cols();
  if (sparsity < 1 || sparsity > std::min(m, n)) {
    throw Error(ErrorCode::kInvalidArgument,
                "omp sparsity " + std::to_string(sparsity) +
                    " outside [1, min(m, n) = " + std::to_string(std::min(m, n)) +
                    "]");
  }
  const Matrix columns = sys.matrix.transposed();
  std::vector<double> col_norm(n);
  for (std::size_t j = 0; j < n; ++j) col_norm[j] = norm2(columns.row(j));

  std::vector<bool> excluded(n, false);
  std::vector<std::size_t> support;
  std::vector<double> coef;
  std::vector<double> residual = sys.rhs;
  std::size_t iterations = 0;

  while (support.size() < sparsity && norm2(residual) >= options.eq_tol) {
    ++iterations;
    std::size_t best = n;
    double best_corr = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      if (excluded[j] || col_norm[j] == 0.0) continue;
      const double corr =
          std::abs(simd::dot(columns.row(j), residual)) / col_norm[j];
      if (corr > best_corr) {
        best_corr = corr;
        best = j;
      }
    }
    if (best == n || best_corr <= 1e-14 * norm2(residual)) {
      throw Error(ErrorCode::kDegenerateColumn,
                  "omp: no remaining column correlates with the residual "
                  "(norm " + std::to_string(norm2(residual)) + ")");
    }
    excluded[best] = true;

    // Refit on the enlarged support; a column that is linearly dependent on
    // the current support is skipped.
    Matrix sub_cols(support.size() + 1, m);
    for (std::size_t k = 0; k < support.size(); ++k) {
      std::copy(columns.row(support[k]).begin(), columns.row(support[k]).end(),
                sub_cols.row(k).begin());
    }
    std::copy(columns.row(best).begin(), columns.row(best).end(),
              sub_cols.row(support.size()).begin());
    std::size_t failed = 0;
    std::vector<double> fit = householder_solve(sub_cols, sys.rhs, &failed);
    if (fit.empty()) continue;
    support.push_back(best);
    coef = std::move(fit);

    residual = sys.rhs;
    for (std::size_t k = 0; k < support.size(); ++k) {
      simd::axpy(-coef[k], columns.row(support[k]), residual);
    }
  }

  std::vector<double> s(n, 0.0);
  for (std::size_t k = 0; k < support.size(); ++k) s[support[k]] = coef[k];
  SparseSolution out = make_solution(sys, std::move(s), options.support_tol);
  out.iterations = iterations;
  return out;
}

}  // namespace fairquery
