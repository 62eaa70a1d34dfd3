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

#include "fairquery/fairness.h"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <string>

#include "fairquery/error.h"
#include "fairquery/simd/kernels.h"

namespace fairquery {
namespace {

void require_binary(std::span<const std::uint8_t> v, const char* name) {
  for (std::size_t j = 0; j < v.size(); ++j) {
    if (v[j] > 1) {
      throw Error(ErrorCode::kInvalidArgument,
                  std::string(name) + "[" + std::to_string(j) +
                      "] is not binary");
    }
  }
}

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return out;
}

double parity(GroupSums sums, std::size_t n1, std::size_t n0) {
  return sums.lambda / static_cast<double>(n1) -
         sums.mu / static_cast<double>(n0);
}

void check_row(const Dataset& ds, std::span<const double> row) {
  if (row.size() != ds.n()) {
    throw Error(ErrorCode::kInvalidArgument,
                "prediction row has length " + std::to_string(row.size()) +
                    ", dataset has n = " + std::to_string(ds.n()));
  }
}

}  // namespace

Dataset::Dataset(std::vector<std::uint8_t> y, std::vector<std::uint8_t> a,
                 std::optional<Matrix> features)
    : y_(std::move(y)), a_(std::move(a)), features_(std::move(features)) {
  if (y_.size() != a_.size()) {
    throw Error(ErrorCode::kInvalidArgument,
                "y and a lengths differ: " + std::to_string(y_.size()) +
                    " vs " + std::to_string(a_.size()));
  }
  require_binary(y_, "y");
  require_binary(a_, "a");
  if (features_ && features_->rows() != a_.size()) {
    throw Error(ErrorCode::kInvalidArgument,
                "feature matrix has " + std::to_string(features_->rows()) +
                    " rows for " + std::to_string(a_.size()) + " individuals");
  }
  codes_.resize(a_.size());
  positive_codes_.resize(a_.size());
  for (std::size_t j = 0; j < a_.size(); ++j) {
    codes_[j] = a_[j] ? simd::kGroupAdvantaged : simd::kGroupDisadvantaged;
    positive_codes_[j] = y_[j] ? codes_[j] : simd::kGroupExcluded;
    (a_[j] ? n1_ : n0_) += 1;
    if (y_[j]) (a_[j] ? n1_pos_ : n0_pos_) += 1;
  }
}

std::vector<std::size_t> Dataset::positive_indices() const {
  std::vector<std::size_t> idx;
  idx.reserve(n_positive());
  for (std::size_t j = 0; j < y_.size(); ++j) {
    if (y_[j]) idx.push_back(j);
  }
  return idx;
}

PredictionMatrix::PredictionMatrix(Matrix h, PredictionKind kind)
    : h_(std::move(h)), kind_(kind) {
  const auto values = h_.data();
  for (std::size_t k = 0; k < values.size(); ++k) {
    const double v = values[k];
    const bool ok = kind_ == PredictionKind::kBinary ? (v == 0.0 || v == 1.0)
                                                     : (v >= 0.0 && v <= 1.0);
    if (!ok) {
      throw Error(ErrorCode::kInvalidArgument,
                  "prediction (" + std::to_string(k / h_.cols()) + "," +
                      std::to_string(k % h_.cols()) + ") = " +
                      std::to_string(v) + " is out of range");
    }
  }
}

std::string_view metric_name(Metric metric) {
  switch (metric) {
    case Metric::kSp:
      return "SP";
    case Metric::kAbsSp:
      return "ABS_SP";
    case Metric::kEo:
      return "EO";
    case Metric::kAbsEo:
      return "ABS_EO";
  }
  return "SP";
}

std::string_view mechanism_name(Mechanism mechanism) {
  switch (mechanism) {
    case Mechanism::kNone:
      return "none";
    case Mechanism::kLaplaceGlobal:
      return "laplace_global";
    case Mechanism::kCauchySmooth:
      return "cauchy_smooth";
    case Mechanism::kLaplaceSmooth:
      return "laplace_smooth";
  }
  return "none";
}

Metric parse_metric(std::string_view name) {
  const std::string s = lower(name);
  if (s == "sp") return Metric::kSp;
  if (s == "abs_sp") return Metric::kAbsSp;
  if (s == "eo") return Metric::kEo;
  if (s == "abs_eo") return Metric::kAbsEo;
  throw Error(ErrorCode::kInvalidArgument,
              "unknown metric '" + std::string(name) + "'");
}

Mechanism parse_mechanism(std::string_view name) {
  const std::string s = lower(name);
  for (Mechanism m : {Mechanism::kNone, Mechanism::kLaplaceGlobal,
                      Mechanism::kCauchySmooth, Mechanism::kLaplaceSmooth}) {
    if (s == mechanism_name(m)) return m;
  }
  throw Error(ErrorCode::kInvalidArgument,
              "unknown mechanism '" + std::string(name) + "'");
}

bool is_absolute(Metric metric) {
  return metric == Metric::kAbsSp || metric == Metric::kAbsEo;
}

bool is_equal_opportunity(Metric metric) {
  return metric == Metric::kEo || metric == Metric::kAbsEo;
}

GroupSums group_sums(const Dataset& ds, std::span<const double> row) {
  check_row(ds, row);
  const simd::Sums s = simd::group_sums(row, ds.group_codes());
  return {s.advantaged, s.disadvantaged};
}

double statistical_parity(const Dataset& ds, std::span<const double> row) {
  check_row(ds, row);
  if (ds.n0() == 0 || ds.n1() == 0) {
    throw Error(ErrorCode::kEmptyGroup,
                "statistical parity needs both groups: N0 = " +
                    std::to_string(ds.n0()) +
                    ", N1 = " + std::to_string(ds.n1()));
  }
  return parity(group_sums(ds, row), ds.n1(), ds.n0());
}

double equal_opportunity(const Dataset& ds, std::span<const double> row) {
  check_row(ds, row);
  if (ds.n0_positive() == 0 || ds.n1_positive() == 0) {
    throw Error(ErrorCode::kEmptyGroup,
                "equal opportunity needs y = 1 individuals in both groups: "
                "N0+ = " + std::to_string(ds.n0_positive()) +
                    ", N1+ = " + std::to_string(ds.n1_positive()));
  }
  const simd::Sums s = simd::group_sums(row, ds.positive_group_codes());
  return parity({s.advantaged, s.disadvantaged}, ds.n1_positive(),
                ds.n0_positive());
}

double evaluate(const Dataset& ds, std::span<const double> row, Metric metric) {
  switch (metric) {
    case Metric::kSp:
      return statistical_parity(ds, row);
    case Metric::kAbsSp:
      return std::abs(statistical_parity(ds, row));
    case Metric::kEo:
      return equal_opportunity(ds, row);
    case Metric::kAbsEo:
      return std::abs(equal_opportunity(ds, row));
  }
  return 0.0;
}

QueryBatch metric_batch(const Dataset& ds, const PredictionMatrix& preds,
                        Metric metric) {
  QueryBatch batch;
  batch.metric = metric;
  batch.values.reserve(preds.m());
  for (std::size_t i = 0; i < preds.m(); ++i) {
    try {
      batch.values.push_back(evaluate(ds, preds.row(i), metric));
    } catch (const Error& e) {
      throw Error(e.code(), "row " + std::to_string(i) + ": " + e.what());
    }
  }
  return batch;
}

}  // namespace fairquery
