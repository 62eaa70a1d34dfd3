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

#include "simplex.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "fairquery/error.h"
#include "fairquery/simd/kernels.h"

namespace fairquery::internal {
namespace {

constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

class Tableau {
 public:
  Tableau(const LpProblem& p, const LpOptions& options)
      : options_(options),
        rows_(p.a.rows()),
        structural_(p.a.cols()) {
    std::size_t artificials = 0;
    for (double bi : p.b) artificials += bi < 0.0 ? 1 : 0;
    first_artificial_ = structural_ + rows_;
    width_ = first_artificial_ + artificials + 1;
    rhs_ = width_ - 1;
    cells_.assign((rows_ + 1) * width_, 0.0);
    basis_.resize(rows_);
    allowed_.assign(width_ - 1, true);

    std::size_t next_artificial = first_artificial_;
    for (std::size_t i = 0; i < rows_; ++i) {
      auto r = row(i);
      const double sign = p.b[i] < 0.0 ? -1.0 : 1.0;
      for (std::size_t j = 0; j < structural_; ++j) r[j] = sign * p.a(i, j);
      r[structural_ + i] = sign;
      r[rhs_] = sign * p.b[i];
      if (sign > 0.0) {
        basis_[i] = structural_ + i;
      } else {
        r[next_artificial] = 1.0;
        basis_[i] = next_artificial++;
      }
    }
    max_abs_b_ = 1.0;
    for (double bi : p.b) max_abs_b_ = std::max(max_abs_b_, std::abs(bi));
  }

  std::span<double> row(std::size_t i) {
    return {cells_.data() + i * width_, width_};
  }
  std::span<double> cost_row() { return row(rows_); }

  bool has_artificials() const { return first_artificial_ + 1 < width_; }

  // Phase one: minimize the sum of artificials.
  void load_phase_one_costs() {
    auto z = cost_row();
    std::fill(z.begin(), z.end(), 0.0);
    for (std::size_t i = 0; i < rows_; ++i) {
      if (is_artificial(basis_[i])) simd::axpy(-1.0, row(i), z);
    }
    for (std::size_t j = first_artificial_; j < rhs_; ++j) z[j] = 0.0;
    for (std::size_t i = 0; i < rows_; ++i) {
      if (is_artificial(basis_[i])) z[basis_[i]] = 0.0;
    }
  }

  void load_phase_two_costs(std::span<const double> c) {
    for (std::size_t j = first_artificial_; j < rhs_; ++j) allowed_[j] = false;
    auto z = cost_row();
    std::fill(z.begin(), z.end(), 0.0);
    for (std::size_t j = 0; j < structural_; ++j) z[j] = c[j];
    for (std::size_t i = 0; i < rows_; ++i) {
      const std::size_t b = basis_[i];
      const double cb = b < structural_ ? c[b] : 0.0;
      if (cb != 0.0) simd::axpy(-cb, row(i), z);
    }
  }

  double objective() { return -cost_row()[rhs_]; }

  // Runs pivots until optimal. Returns false on unboundedness.
  bool optimize(std::size_t& iterations, std::size_t max_iter,
                std::size_t& bland_pivots) {
    std::size_t degenerate_run = 0;
    for (;;) {
      const bool bland = degenerate_run >= options_.degenerate_limit;
      const std::size_t enter = choose_entering(bland);
      if (enter == kNone) return true;
      const auto [leave, ratio] = choose_leaving(enter, bland);
      if (leave == kNone) return false;
      if (iterations >= max_iter) {
        throw Error(ErrorCode::kNonConvergence,
                    "simplex did not converge within " +
                        std::to_string(max_iter) + " pivots");
      }
      pivot(leave, enter);
      ++iterations;
      if (bland) ++bland_pivots;
      degenerate_run = ratio <= 1e-12 ? degenerate_run + 1 : 0;
    }
  }

  // Pivots basic artificials (at zero level) out of the basis where a
  // non-artificial column can take their place.
  void evict_artificials() {
    for (std::size_t i = 0; i < rows_; ++i) {
      if (!is_artificial(basis_[i])) continue;
      auto r = row(i);
      std::size_t best = kNone;
      double best_abs = options_.pivot_tol;
      for (std::size_t j = 0; j < first_artificial_; ++j) {
        if (std::abs(r[j]) > best_abs) {
          best_abs = std::abs(r[j]);
          best = j;
        }
      }
      if (best != kNone) pivot(i, best);
    }
  }

  std::vector<double> structural_solution() {
    std::vector<double> x(structural_, 0.0);
    for (std::size_t i = 0; i < rows_; ++i) {
      if (basis_[i] < structural_) x[basis_[i]] = std::max(0.0, row(i)[rhs_]);
    }
    return x;
  }

  double feasibility_threshold() const {
    return options_.feasibility_tol * max_abs_b_;
  }

 private:
  bool is_artificial(std::size_t col) const { return col >= first_artificial_; }

  std::size_t choose_entering(bool bland) {
    auto z = cost_row();
    std::size_t best = kNone;
    double best_value = -options_.cost_tol;
    for (std::size_t j = 0; j < rhs_; ++j) {
      if (!allowed_[j] || z[j] >= best_value) continue;
      best = j;
      if (bland) break;
      best_value = z[j];
    }
    return best;
  }

  std::pair<std::size_t, double> choose_leaving(std::size_t enter, bool bland) {
    std::size_t best = kNone;
    double best_ratio = std::numeric_limits<double>::infinity();
    double best_pivot = 0.0;
    for (std::size_t i = 0; i < rows_; ++i) {
      const auto r = row(i);
      const double a = r[enter];
      if (a <= options_.pivot_tol) continue;
      const double ratio = std::max(0.0, r[rhs_]) / a;
      const double slack = 1e-12 * std::max(1.0, best_ratio);
      bool take = false;
      if (ratio < best_ratio - slack) {
        take = true;
      } else if (ratio <= best_ratio + slack) {
        // Tie: Bland keeps the smallest basic index, otherwise prefer the
        // larger pivot element.
        take = bland ? basis_[i] < basis_[best] : a > best_pivot;
      }
      if (take) {
        best = i;
        best_ratio = ratio;
        best_pivot = a;
      }
    }
    return {best, best_ratio};
  }

  void pivot(std::size_t p, std::size_t q) {
    auto prow = row(p);
    simd::scale(1.0 / prow[q], prow);
    prow[q] = 1.0;
    for (std::size_t i = 0; i <= rows_; ++i) {
      if (i == p) continue;
      auto r = row(i);
      const double f = r[q];
      if (f == 0.0) continue;
      simd::axpy(-f, prow, r);
      r[q] = 0.0;
    }
    basis_[p] = q;
  }

  LpOptions options_;
  std::size_t rows_;
  std::size_t structural_;
  std::size_t first_artificial_ = 0;
  std::size_t width_ = 0;
  std::size_t rhs_ = 0;
  double max_abs_b_ = 1.0;
  std::vector<double> cells_;
  std::vector<std::size_t> basis_;
  std::vector<bool> allowed_;
};

}  // namespace

LpResult solve_lp(const LpProblem& problem, const LpOptions& options) {
  const std::size_t rows = problem.a.rows();
  const std::size_t cols = problem.a.cols();
  if (problem.b.size() != rows || problem.c.size() != cols) {
    throw Error(ErrorCode::kInvalidArgument, "LP dimensions are inconsistent");
  }
  const std::size_t max_iter =
      options.max_iter ? options.max_iter : 10 * (rows + cols);

  Tableau t(problem, options);
  LpResult result;
  if (t.has_artificials()) {
    t.load_phase_one_costs();
    if (!t.optimize(result.iterations, max_iter, result.bland_pivots)) {
      throw Error(ErrorCode::kNonConvergence, "phase one is unbounded");
    }
    if (t.objective() > t.feasibility_threshold()) {
      throw Error(ErrorCode::kInfeasible,
                  "no feasible point: residual constraint violation " +
                      std::to_string(t.objective()));
    }
    t.evict_artificials();
  }
  t.load_phase_two_costs(problem.c);
  if (!t.optimize(result.iterations, max_iter, result.bland_pivots)) {
    throw Error(ErrorCode::kNonConvergence, "objective is unbounded below");
  }
  result.x = t.structural_solution();
  result.objective = simd::dot(problem.c, result.x);
  return result;
}

}  // namespace fairquery::internal
