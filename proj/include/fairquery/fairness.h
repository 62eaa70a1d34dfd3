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

#ifndef FAIRQUERY_FAIRNESS_H_
#define FAIRQUERY_FAIRNESS_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "fairquery/matrix.h"

namespace fairquery {

// Test dataset held by the compliance side. `a[j] == 1` marks the advantaged
// group, `a[j] == 0` the disadvantaged group.
class Dataset {
 public:
  // Throws Error(kInvalidArgument) on length mismatch or non-binary entries.
  Dataset(std::vector<std::uint8_t> y, std::vector<std::uint8_t> a,
          std::optional<Matrix> features = std::nullopt);

  std::size_t n() const noexcept { return a_.size(); }
  std::size_t n0() const noexcept { return n0_; }
  std::size_t n1() const noexcept { return n1_; }
  // Group sizes restricted to individuals with y = 1.
  std::size_t n0_positive() const noexcept { return n0_pos_; }
  std::size_t n1_positive() const noexcept { return n1_pos_; }
  std::size_t n_positive() const noexcept { return n0_pos_ + n1_pos_; }

  std::span<const std::uint8_t> y() const noexcept { return y_; }
  std::span<const std::uint8_t> a() const noexcept { return a_; }
  const std::optional<Matrix>& features() const noexcept { return features_; }

  // Group codes for simd::group_sums: everyone, or only y = 1.
  std::span<const std::uint8_t> group_codes() const noexcept { return codes_; }
  std::span<const std::uint8_t> positive_group_codes() const noexcept {
    return positive_codes_;
  }

  // Indices j with y_j = 1, ascending.
  std::vector<std::size_t> positive_indices() const;

 private:
  std::vector<std::uint8_t> y_;
  std::vector<std::uint8_t> a_;
  std::optional<Matrix> features_;
  std::vector<std::uint8_t> codes_;
  std::vector<std::uint8_t> positive_codes_;
  std::size_t n0_ = 0;
  std::size_t n1_ = 0;
  std::size_t n0_pos_ = 0;
  std::size_t n1_pos_ = 0;
};

enum class PredictionKind { kBinary, kLogistic };

// m x n model outputs: row i is model i, column j is individual j.
class PredictionMatrix {
 public:
  // Throws Error(kInvalidArgument) if an entry leaves [0,1], or is not 0/1
  // for kBinary.
  PredictionMatrix(Matrix h, PredictionKind kind);

  const Matrix& h() const noexcept { return h_; }
  std::size_t m() const noexcept { return h_.rows(); }
  std::size_t n() const noexcept { return h_.cols(); }
  PredictionKind kind() const noexcept { return kind_; }
  std::span<const double> row(std::size_t i) const { return h_.row(i); }

 private:
  Matrix h_;
  PredictionKind kind_;
};

struct GroupSums {
  double lambda = 0.0;  // advantaged
  double mu = 0.0;      // disadvantaged
};

enum class Metric { kSp, kAbsSp, kEo, kAbsEo };

enum class Mechanism { kNone, kLaplaceGlobal, kCauchySmooth, kLaplaceSmooth };

std::string_view metric_name(Metric metric);
std::string_view mechanism_name(Mechanism mechanism);
// Accepts the names above case-insensitively; throws kInvalidArgument.
Metric parse_metric(std::string_view name);
Mechanism parse_mechanism(std::string_view name);

bool is_absolute(Metric metric);
bool is_equal_opportunity(Metric metric);

// Answered fairness queries, clean or privatized.
struct QueryBatch {
  std::vector<double> values;
  Metric metric = Metric::kSp;
  bool privatized = false;
  Mechanism mechanism = Mechanism::kNone;
  std::optional<double> epsilon;
  std::optional<double> delta;
  // Set when a mechanism was run with parameters outside the range its
  // privacy theorem is stated for (e.g. epsilon >= 1 for laplace_smooth).
  bool outside_theorem_range = false;
};

GroupSums group_sums(const Dataset& ds, std::span<const double> row);

// lambda / N1 - mu / N0. Throws kEmptyGroup when either group is empty and
// kInvalidArgument when the row length differs from n.
double statistical_parity(const Dataset& ds, std::span<const double> row);

// Statistical parity over {j : y_j = 1}. Throws kEmptyGroup when either group
// has no positive individual.
double equal_opportunity(const Dataset& ds, std::span<const double> row);

double evaluate(const Dataset& ds, std::span<const double> row, Metric metric);

// values[i] = metric(row i). Errors carry the offending row index.
QueryBatch metric_batch(const Dataset& ds, const PredictionMatrix& preds,
                        Metric metric);

}  // namespace fairquery

#endif  // FAIRQUERY_FAIRNESS_H_
