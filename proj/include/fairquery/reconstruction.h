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

#ifndef FAIRQUERY_RECONSTRUCTION_H_
#define FAIRQUERY_RECONSTRUCTION_H_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fairquery/fairness.h"
#include "fairquery/sparse_solver.h"

namespace fairquery {

enum class Strategy {
  kFullRank,
  kCompressedSensing,
  kSingleQuery,
  kDoubleQuery,
  kAbsPartition,
};

// How compressed-sensing rows are drawn: clipped uniform perturbations of the
// base row, or i.i.d. fair coin flips.
enum class Sensing { kPerturbed, kBinary };

enum class SparseMethod { kBasisPursuit, kOmp };

std::string_view strategy_name(Strategy strategy);
Strategy parse_strategy(std::string_view name);
std::string_view sparse_method_name(SparseMethod method);
SparseMethod parse_sparse_method(std::string_view name);

struct AttackPlan {
  Strategy strategy;
  Sensing sensing = Sensing::kPerturbed;
  std::vector<double> base_row;
  // Set when the group sizes were estimated with an extra probe query.
  bool probe_included = false;
  PredictionMatrix matrix;
};

// Recovered protected attribute. Values 0 and 1 match the attribute coding.
enum class Recovered : std::uint8_t {
  kDisadvantaged = 0,
  kAdvantaged = 1,
  kUnknown = 2,
};

struct ReconstructionReport {
  std::vector<Recovered> a_hat;
  std::optional<std::vector<double>> v;
  std::optional<std::vector<double>> s;
  // Counts of recovered labels over the attacked population.
  std::optional<std::size_t> n0_est;
  std::optional<std::size_t> n1_est;
  // Filled by score().
  std::optional<double> leakage_pct;
  std::size_t queries_used = 0;
  std::vector<std::string> warnings;
};

enum class Side : std::uint8_t { kAlpha, kBeta };

struct PartitionResult {
  std::vector<Side> labels;
  std::size_t size_alpha = 0;
  std::size_t size_beta = 0;
  std::size_t queries_used = 0;
};

// Answers one fairness query for an arbitrary prediction row.
using AnswerFn = std::function<double(std::span<const double>)>;

struct RevealOptions {
  SparseMethod solver = SparseMethod::kBasisPursuit;
  SolverOptions solver_options;
};

// ---------------------------------------------------------------------------
// Plans
// ---------------------------------------------------------------------------

// Row i is `base_row` with entry i replaced by 1 - base_row[i]. The matrix is
// nonsingular exactly when base_row does not contain a single 1.
AttackPlan plan_full_rank(std::span<const double> base_row);

// Entry (i, j) = clip(base_row[j] + u_ij, 0, 1), u_ij ~ U(-0.1, 0.1) drawn
// row-major from SplitMix64(seed).
AttackPlan plan_compressed_sensing(std::span<const double> base_row,
                                   std::size_t m, std::uint64_t seed);

// m x n matrix of i.i.d. Bernoulli(1/2) entries. base_row is all 1/2.
AttackPlan plan_binary_sensing(std::size_t n, std::size_t m,
                               std::uint64_t seed);

// Copies the columns of `plan.matrix` into positions `columns` of an
// n-column matrix, zero elsewhere. Used to pose plans built over a
// sub-population as queries over the whole dataset.
PredictionMatrix embed_columns(const PredictionMatrix& matrix,
                               std::span<const std::size_t> columns,
                               std::size_t n);

// ---------------------------------------------------------------------------
// Attacks
// ---------------------------------------------------------------------------

struct GroupSizeEstimate {
  std::size_t n1 = 0;
  std::size_t n0 = 0;
};

// Queries the row accepting only the first individual. SP = 1/N1 when that
// individual is advantaged and -1/N0 otherwise. Throws kZeroResponse on an
// exact zero and kAmbiguousResponse when the rounded size is outside
// [1, n - 1].
GroupSizeEstimate probe_group_sizes(std::size_t n, const AnswerFn& answer_fn);

// Solves answers = H v and sets a_hat_j = 1 iff v_j > 0.
ReconstructionReport reveal_full_rank(const AttackPlan& plan,
                                      const QueryBatch& answers,
                                      std::size_t n1, std::size_t n0);

// Recovers the sparse s with H s = H r - answers, r = 1/N1, and marks j
// disadvantaged iff s_j > (1/N1 + 1/N0) / 2. Adds a warning when n0 > n1.
ReconstructionReport reveal_compressed_sensing(
    const AttackPlan& plan, const QueryBatch& answers, std::size_t n1,
    std::size_t n0, const RevealOptions& options = {});

// Runs the plan's attack on the y = 1 sub-population. `plan` has one column
// per positive individual in dataset order; the rest are reported unknown.
// Throws kEmptyGroup when either positive group is empty.
ReconstructionReport reveal_equal_opportunity(
    const AttackPlan& plan, const QueryBatch& answers, const Dataset& ds,
    std::size_t n1_pos, std::size_t n0_pos, const RevealOptions& options = {});

// Splits n individuals into two groups from |SP| answers to single- and
// pair-acceptor rows, with the first individual's group labelled alpha.
// Throws kAmbiguousResponse when an answer matches neither candidate.
PartitionResult partition_abs_sp(std::size_t n, const AnswerFn& answer_fn,
                                 double match_tol = 1e-9);

// Maps the smaller partition to the disadvantaged group (alpha on a tie).
std::vector<Recovered> partition_attributes(const PartitionResult& partition);

// ---------------------------------------------------------------------------
// Scoring
// ---------------------------------------------------------------------------

// 50 * (N_A / N1 + N_B / N0), N_A and N_B the correctly recovered members of
// each group. Unknown entries leave both numerator and denominator.
// Throws kEmptyGroup when a group has no known entries.
double leakage(std::span<const std::uint8_t> a_true,
               std::span<const Recovered> a_hat);
double leakage(std::span<const std::uint8_t> a_true,
               std::span<const std::uint8_t> a_hat);

// Sets report.leakage_pct against the true attributes.
void score(ReconstructionReport& report, std::span<const std::uint8_t> a_true);

}  // namespace fairquery

#endif  // FAIRQUERY_RECONSTRUCTION_H_
