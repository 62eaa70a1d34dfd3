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

#include "fairquery/reconstruction.h"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <string>

#include "fairquery/error.h"
#include "fairquery/rng.h"

namespace fairquery {
namespace {

std::string lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(c));
  return out;
}

void check_answers(const AttackPlan& plan, const QueryBatch& answers) {
  if (answers.values.size() != plan.matrix.m()) {
    throw Error(ErrorCode::kInvalidArgument,
                "plan has " + std::to_string(plan.matrix.m()) +
                    " queries but " + std::to_string(answers.values.size()) +
                    " answers were given");
  }
  if (is_absolute(answers.metric)) {
    throw Error(ErrorCode::kInvalidArgument,
                "signed SP or EO answers are required, got " +
                    std::string(metric_name(answers.metric)));
  }
}

void check_sizes(const AttackPlan& plan, std::size_t n1, std::size_t n0) {
  if (n1 == 0 || n0 == 0) {
    throw Error(ErrorCode::kEmptyGroup,
                "group sizes must be positive (N1 = " + std::to_string(n1) +
                    ", N0 = " + std::to_string(n0) + ")");
  }
  if (n1 + n0 != plan.matrix.n()) {
    throw Error(ErrorCode::kInvalidArgument,
                "N1 + N0 = " + std::to_string(n1 + n0) + " but the plan has " +
                    std::to_string(plan.matrix.n()) + " columns");
  }
}

void count_labels(ReconstructionReport& report) {
  std::size_t n0 = 0;
  std::size_t n1 = 0;
  for (Recovered r : report.a_hat) {
    if (r == Recovered::kDisadvantaged) ++n0;
    if (r == Recovered::kAdvantaged) ++n1;
  }
  report.n0_est = n0;
  report.n1_est = n1;
}

std::vector<double> unit_row(std::size_t n, std::size_t i, std::size_t j) {
  std::vector<double> row(n, 0.0);
  row[i] = 1.0;
  row[j] = 1.0;
  return row;
}

}  // namespace

std::string_view strategy_name(Strategy strategy) {
  switch (strategy) {
    case Strategy::kFullRank:
      return "full_rank";
    case Strategy::kCompressedSensing:
      return "compressed_sensing";
    case Strategy::kSingleQuery:
      return "single_query";
    case Strategy::kDoubleQuery:
      return "double_query";
    case Strategy::kAbsPartition:
      return "abs_partition";
  }
  return "unknown";
}

Strategy parse_strategy(std::string_view name) {
  const std::string s = lower(name);
  for (Strategy st : {Strategy::kFullRank, Strategy::kCompressedSensing,
                      Strategy::kSingleQuery, Strategy::kDoubleQuery,
                      Strategy::kAbsPartition}) {
    if (s == strategy_name(st)) return st;
  }
  throw Error(ErrorCode::kInvalidArgument,
              "unknown attack strategy '" + std::string(name) + "'");
}

std::string_view sparse_method_name(SparseMethod method) {
  return method == SparseMethod::kOmp ? "omp" : "bp";
}

SparseMethod parse_sparse_method(std::string_view name) {
  const std::string s = lower(name);
  if (s == "bp" || s == "basis_pursuit") return SparseMethod::kBasisPursuit;
  if (s == "omp") return SparseMethod::kOmp;
  throw Error(ErrorCode::kInvalidArgument,
              "unknown solver '" + std::string(name) + "' (expected bp or omp)");
}

// ---------------------------------------------------------------------------

AttackPlan plan_full_rank(std::span<const double> base_row) {
  const std::size_t n = base_row.size();
  if (n == 0) {
    throw Error(ErrorCode::kInvalidArgument, "base row is empty");
  }
  for (std::size_t j = 0; j < n; ++j) {
    if (base_row[j] != 0.0 && base_row[j] != 1.0) {
      throw Error(ErrorCode::kInvalidArgument,
                  "full-rank base row must be binary; entry " +
                      std::to_string(j) + " is " + std::to_string(base_row[j]));
    }
  }
  Matrix h(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    auto row = h.row(i);
    std::copy(base_row.begin(), base_row.end(), row.begin());
    row[i] = 1.0 - base_row[i];
  }
  return AttackPlan{Strategy::kFullRank, Sensing::kPerturbed,
                    {base_row.begin(), base_row.end()}, false,
                    PredictionMatrix(std::move(h), PredictionKind::kBinary)};
}

AttackPlan plan_compressed_sensing(std::span<const double> base_row,
                                   std::size_t m, std::uint64_t seed) {
  const std::size_t n = base_row.size();
  if (m < 1) {
    throw Error(ErrorCode::kInvalidArgument, "need at least one query");
  }
  for (std::size_t j = 0; j < n; ++j) {
    if (!(base_row[j] >= 0.0 && base_row[j] <= 1.0)) {
      throw Error(ErrorCode::kInvalidArgument,
                  "base row entry " + std::to_string(j) + " is outside [0, 1]");
    }
  }
  SplitMix64 rng(seed);
  Matrix h(m, n);
  for (std::size_t i = 0; i < m; ++i) {
    auto row = h.row(i);
    for (std::size_t j = 0; j < n; ++j) {
      row[j] = std::clamp(base_row[j] + rng.uniform(-0.1, 0.1), 0.0, 1.0);
    }
  }
  return AttackPlan{Strategy::kCompressedSensing, Sensing::kPerturbed,
                    {base_row.begin(), base_row.end()}, false,
                    PredictionMatrix(std::move(h), PredictionKind::kLogistic)};
}

AttackPlan plan_binary_sensing(std::size_t n, std::size_t m,
                               std::uint64_t seed) {
  if (m < 1 || n < 1) {
    throw Error(ErrorCode::kInvalidArgument,
                "binary sensing needs m >= 1 and n >= 1");
  }
  SplitMix64 rng(seed);
  Matrix h(m, n);
  for (double& v : h.data()) v = rng.bernoulli(0.5) ? 1.0 : 0.0;
  return AttackPlan{Strategy::kCompressedSensing, Sensing::kBinary,
                    std::vector<double>(n, 0.5), false,
                    PredictionMatrix(std::move(h), PredictionKind::kBinary)};
}

PredictionMatrix embed_columns(const PredictionMatrix& matrix,
                               std::span<const std::size_t> columns,
                               std::size_t n) {
  if (columns.size() != matrix.n()) {
    throw Error(ErrorCode::kInvalidArgument,
                "column map has " + std::to_string(columns.size()) +
                    " entries for " + std::to_string(matrix.n()) + " columns");
  }
  Matrix h(matrix.m(), n);
  for (std::size_t i = 0; i < matrix.m(); ++i) {
    const auto src = matrix.row(i);
    auto dst = h.row(i);
    for (std::size_t k = 0; k < columns.size(); ++k) {
      if (columns[k] >= n) {
        throw Error(ErrorCode::kInvalidArgument, "column index out of range");
      }
      dst[columns[k]] = src[k];
    }
  }
  return PredictionMatrix(std::move(h), matrix.kind());
}

// ---------------------------------------------------------------------------

GroupSizeEstimate probe_group_sizes(std::size_t n, const AnswerFn& answer_fn) {
  if (n < 2) {
    throw Error(ErrorCode::kInvalidArgument, "probe needs n >= 2");
  }
  std::vector<double> row(n, 0.0);
  row[0] = 1.0;
  const double sp = answer_fn(row);
  if (sp == 0.0) {
    throw Error(ErrorCode::kZeroResponse,
                "probe answer is exactly 0; group sizes cannot be inverted");
  }
  const double size = std::round(1.0 / std::abs(sp));
  if (!(size >= 1.0 && size <= static_cast<double>(n - 1))) {
    throw Error(ErrorCode::kAmbiguousResponse,
                "probe answer " + std::to_string(sp) +
                    " implies a group of size " + std::to_string(size) +
                    " outside [1, " + std::to_string(n - 1) + "]");
  }
  const auto k = static_cast<std::size_t>(size);
  if (sp > 0.0) return {k, n - k};
  return {n - k, k};
}

ReconstructionReport reveal_full_rank(const AttackPlan& plan,
                                      const QueryBatch& answers,
                                      std::size_t n1, std::size_t n0) {
  if (plan.strategy != Strategy::kFullRank) {
    throw Error(ErrorCode::kInvalidArgument,
                "reveal_full_rank needs a full_rank plan");
  }
  check_answers(plan, answers);
  check_sizes(plan, n1, n0);
  std::vector<double> v =
      solve_full_rank(LinearSystem{plan.matrix.h(), answers.values});

  ReconstructionReport report;
  report.a_hat.reserve(v.size());
  for (double vj : v) {
    report.a_hat.push_back(vj > 0.0 ? Recovered::kAdvantaged
                                    : Recovered::kDisadvantaged);
  }
  report.v = std::move(v);
  report.queries_used = plan.matrix.m() + (plan.probe_included ? 1 : 0);
  count_labels(report);
  return report;
}

ReconstructionReport reveal_compressed_sensing(const AttackPlan& plan,
                                               const QueryBatch& answers,
                                               std::size_t n1, std::size_t n0,
                                               const RevealOptions& options) {
  if (plan.strategy != Strategy::kCompressedSensing) {
    throw Error(ErrorCode::kInvalidArgument,
                "reveal_compressed_sensing needs a compressed_sensing plan");
  }
  check_answers(plan, answers);
  check_sizes(plan, n1, n0);
  const Matrix& h = plan.matrix.h();
  const std::size_t n = h.cols();
  const double r = 1.0 / static_cast<double>(n1);

  // H s = H r - answers, with s_j = 1/N1 + 1/N0 on the disadvantaged group
  // and 0 elsewhere.
  const std::vector<double> hr = multiply(h, std::vector<double>(n, r));
  std::vector<double> rhs(hr.size());
  for (std::size_t i = 0; i < rhs.size(); ++i) {
    rhs[i] = hr[i] - answers.values[i];
  }
  const LinearSystem sys{h, std::move(rhs)};

  ReconstructionReport report;
  if (n0 > n1) {
    report.warnings.push_back(
        "N0 = " + std::to_string(n0) + " exceeds N1 = " + std::to_string(n1) +
        "; the disadvantaged group is not the sparse one");
  }
  SparseSolution sol =
      options.solver == SparseMethod::kOmp
          ? omp(sys, std::min({n0, h.rows(), n}), options.solver_options)
          : basis_pursuit(sys, options.solver_options);

  const double threshold =
      0.5 * (1.0 / static_cast<double>(n1) + 1.0 / static_cast<double>(n0));
  report.a_hat.reserve(n);
  std::vector<double> v(n);
  for (std::size_t j = 0; j < n; ++j) {
    report.a_hat.push_back(sol.s[j] > threshold ? Recovered::kDisadvantaged
                                                : Recovered::kAdvantaged);
    v[j] = r - sol.s[j];
  }
  report.v = std::move(v);
  report.s = std::move(sol.s);
  report.queries_used = plan.matrix.m() + (plan.probe_included ? 1 : 0);
  count_labels(report);
  return report;
}

ReconstructionReport reveal_equal_opportunity(
    const AttackPlan& plan, const QueryBatch& answers, const Dataset& ds,
    std::size_t n1_pos, std::size_t n0_pos, const RevealOptions& options) {
  if (n1_pos == 0 || n0_pos == 0) {
    throw Error(ErrorCode::kEmptyGroup,
                "equal opportunity needs both groups among y = 1 (N1 = " +
                    std::to_string(n1_pos) +
                    ", N0 = " + std::to_string(n0_pos) + ")");
  }
  const std::vector<std::size_t> positives = ds.positive_indices();
  if (plan.matrix.n() != positives.size()) {
    throw Error(ErrorCode::kInvalidArgument,
                "plan has " + std::to_string(plan.matrix.n()) +
                    " columns for " + std::to_string(positives.size()) +
                    " positive individuals");
  }
  ReconstructionReport sub;
  switch (plan.strategy) {
    case Strategy::kFullRank:
      sub = reveal_full_rank(plan, answers, n1_pos, n0_pos);
      break;
    case Strategy::kCompressedSensing:
      sub = reveal_compressed_sensing(plan, answers, n1_pos, n0_pos, options);
      break;
    default:
      throw Error(ErrorCode::kInvalidArgument,
                  "equal opportunity supports full_rank and "
                  "compressed_sensing plans");
  }
  ReconstructionReport report = std::move(sub);
  std::vector<Recovered> full(ds.n(), Recovered::kUnknown);
  for (std::size_t k = 0; k < positives.size(); ++k) {
    full[positives[k]] = report.a_hat[k];
  }
  report.a_hat = std::move(full);
  return report;
}

PartitionResult partition_abs_sp(std::size_t n, const AnswerFn& answer_fn,
                                 double match_tol) {
  if (n < 2) {
    throw Error(ErrorCode::kInvalidArgument, "partition needs n >= 2");
  }
  PartitionResult out;
  out.labels.assign(n, Side::kAlpha);

  std::vector<double> row(n, 0.0);
  row[0] = 1.0;
  const double first = std::abs(answer_fn(row));
  out.queries_used = 1;
  if (first == 0.0) {
    throw Error(ErrorCode::kZeroResponse,
                "first single-acceptor answer is 0; group size is undefined");
  }
  const double rounded = std::round(1.0 / first);
  if (!(rounded >= 1.0 && rounded <= static_cast<double>(n - 1)) ||
      std::abs(first - 1.0 / rounded) > match_tol) {
    throw Error(ErrorCode::kAmbiguousResponse,
                "answer " + std::to_string(first) +
                    " is not the reciprocal of a group size in [1, " +
                    std::to_string(n - 1) + "]");
  }
  const auto n_alpha = static_cast<std::size_t>(rounded);
  const std::size_t n_beta = n - n_alpha;

  const auto ambiguous = [](std::size_t j, double got) {
    return Error(ErrorCode::kAmbiguousResponse,
                 "answer " + std::to_string(got) + " for individual " +
                     std::to_string(j) + " matches neither partition");
  };

  if (n_alpha != n_beta) {
    const double want_alpha = 1.0 / static_cast<double>(n_alpha);
    const double want_beta = 1.0 / static_cast<double>(n_beta);
    for (std::size_t j = 1; j < n; ++j) {
      std::vector<double> single(n, 0.0);
      single[j] = 1.0;
      const double got = std::abs(answer_fn(single));
      ++out.queries_used;
      if (std::abs(got - want_alpha) <= match_tol) {
        out.labels[j] = Side::kAlpha;
      } else if (std::abs(got - want_beta) <= match_tol) {
        out.labels[j] = Side::kBeta;
      } else {
        throw ambiguous(j, got);
      }
    }
  } else {
    const double want_same = 2.0 / static_cast<double>(n_alpha);
    for (std::size_t j = 1; j < n; ++j) {
      const double got = std::abs(answer_fn(unit_row(n, 0, j)));
      ++out.queries_used;
      if (std::abs(got - want_same) <= match_tol) {
        out.labels[j] = Side::kAlpha;
      } else if (got <= match_tol) {
        out.labels[j] = Side::kBeta;
      } else {
        throw ambiguous(j, got);
      }
    }
  }
  out.size_alpha = static_cast<std::size_t>(
      std::count(out.labels.begin(), out.labels.end(), Side::kAlpha));
  out.size_beta = n - out.size_alpha;
  return out;
}

std::vector<Recovered> partition_attributes(const PartitionResult& partition) {
  const Side minority =
      partition.size_beta < partition.size_alpha ? Side::kBeta : Side::kAlpha;
  std::vector<Recovered> out;
  out.reserve(partition.labels.size());
  for (Side s : partition.labels) {
    out.push_back(s == minority ? Recovered::kDisadvantaged
                                : Recovered::kAdvantaged);
  }
  return out;
}

// ---------------------------------------------------------------------------

double leakage(std::span<const std::uint8_t> a_true,
               std::span<const Recovered> a_hat) {
  if (a_true.size() != a_hat.size()) {
    throw Error(ErrorCode::kInvalidArgument,
                "leakage: " + std::to_string(a_true.size()) +
                    " true attributes vs " + std::to_string(a_hat.size()) +
                    " recovered");
  }
  std::size_t n1 = 0, n0 = 0, hit1 = 0, hit0 = 0;
  for (std::size_t j = 0; j < a_true.size(); ++j) {
    if (a_hat[j] == Recovered::kUnknown) continue;
    if (a_true[j] == 1) {
      ++n1;
      hit1 += a_hat[j] == Recovered::kAdvantaged ? 1 : 0;
    } else {
      ++n0;
      hit0 += a_hat[j] == Recovered::kDisadvantaged ? 1 : 0;
    }
  }
  if (n1 == 0 || n0 == 0) {
    throw Error(ErrorCode::kEmptyGroup,
                "leakage needs both groups among the recovered entries (N1 = " +
                    std::to_string(n1) + ", N0 = " + std::to_string(n0) + ")");
  }
  return 50.0 * (static_cast<double>(hit1) / static_cast<double>(n1) +
                 static_cast<double>(hit0) / static_cast<double>(n0));
}

double leakage(std::span<const std::uint8_t> a_true,
               std::span<const std::uint8_t> a_hat) {
  std::vector<Recovered> r;
  r.reserve(a_hat.size());
  for (std::uint8_t v : a_hat) {
    if (v > 1) {
      throw Error(ErrorCode::kInvalidArgument, "recovered attribute not binary");
    }
    r.push_back(static_cast<Recovered>(v));
  }
  return leakage(a_true, r);
}

void score(ReconstructionReport& report, std::span<const std::uint8_t> a_true) {
  report.leakage_pct = leakage(a_true, report.a_hat);
}

}  // namespace fairquery
