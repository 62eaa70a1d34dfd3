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

#ifndef FAIRQUERY_SPARSE_SOLVER_H_
#define FAIRQUERY_SPARSE_SOLVER_H_

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "fairquery/matrix.h"

namespace fairquery {

// H x = rhs.
struct LinearSystem {
  Matrix matrix;
  std::vector<double> rhs;

  // Throws kInvalidArgument on a dimension mismatch or a non-finite entry.
  void validate() const;
};

struct SparseSolution {
  std::vector<double> s;
  // ||H s - rhs||_2, recomputed from `s`.
  double residual_norm = 0.0;
  // Ascending indices with |s_j| > support_tol.
  std::vector<std::size_t> support;
  std::size_t iterations = 0;
};

struct SolverOptions {
  double eq_tol = 1e-8;
  double support_tol = 1e-6;
  // Defaults to 10 * (m + n) simplex pivots.
  std::optional<std::size_t> max_iter;
};

// Least-squares solution via Householder QR. Requires m >= n and full column
// rank; a column whose pivot falls below a relative threshold raises
// kRankDeficient naming that column.
std::vector<double> solve_full_rank(const LinearSystem& sys);

// min ||s||_1 subject to |(H s - rhs)_i| <= eq_tol / (2 sqrt(m)) for every
// row, which implies ||H s - rhs||_2 <= eq_tol. Solved as a linear program
// over s = u - w, u, w >= 0 with the dense two-phase simplex.
// Throws kInfeasible or kNonConvergence.
SparseSolution basis_pursuit(const LinearSystem& sys,
                             const SolverOptions& options = {});

// Orthogonal matching pursuit: picks the column with the largest normalized
// correlation with the residual, refits least squares on the support, stops
// after `sparsity` picks or once the residual drops below eq_tol.
// Throws kDegenerateColumn when no remaining column correlates with a
// residual above eq_tol.
SparseSolution omp(const LinearSystem& sys, std::size_t sparsity,
                   const SolverOptions& options = {});

// Fills residual_norm and support for a given s.
SparseSolution make_solution(const LinearSystem& sys, std::vector<double> s,
                             double support_tol);

}  // namespace fairquery

#endif  // FAIRQUERY_SPARSE_SOLVER_H_
