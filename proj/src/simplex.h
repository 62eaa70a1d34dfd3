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

#ifndef FAIRQUERY_SRC_SIMPLEX_H_
#define FAIRQUERY_SRC_SIMPLEX_H_

#include <cstddef>
#include <vector>

#include "fairquery/matrix.h"

namespace fairquery::internal {

// minimize c'x  subject to  A x <= b,  x >= 0.   (b may have any sign)
struct LpProblem {
  Matrix a;
  std::vector<double> b;
  std::vector<double> c;
};

struct LpResult {
  std::vector<double> x;
  double objective = 0.0;
  std::size_t iterations = 0;
  std::size_t bland_pivots = 0;
};

struct LpOptions {
  std::size_t max_iter = 0;  // 0 means 10 * (rows + cols)
  double pivot_tol = 1e-9;
  double cost_tol = 1e-9;
  // Phase one must drive the artificial sum below this (scaled by max |b|).
  double feasibility_tol = 1e-9;
  // Consecutive degenerate pivots before switching to Bland's rule.
  std::size_t degenerate_limit = 50;
};

// Dense tableau two-phase primal simplex. Pricing is Dantzig's largest
// reduced cost; after `degenerate_limit` consecutive degenerate pivots it
// switches to Bland's smallest-index rule until the objective moves again,
// which rules out cycling. Throws Error(kInfeasible) when phase one cannot
// reach a feasible point and Error(kNonConvergence) on iteration exhaustion
// or an unbounded objective.
LpResult solve_lp(const LpProblem& problem, const LpOptions& options = {});

}  // namespace fairquery::internal

#endif  // FAIRQUERY_SRC_SIMPLEX_H_
