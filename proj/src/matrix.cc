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

#include "fairquery/matrix.h"

#include <cmath>
#include <string>

#include "fairquery/error.h"
#include "fairquery/simd/kernels.h"

namespace fairquery {

std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument:
      return "invalid_argument";
    case ErrorCode::kEmptyGroup:
      return "empty_group";
    case ErrorCode::kRankDeficient:
      return "rank_deficient";
    case ErrorCode::kInfeasible:
      return "infeasible";
    case ErrorCode::kNonConvergence:
      return "nonconvergence";
    case ErrorCode::kDegenerateColumn:
      return "degenerate_column";
    case ErrorCode::kZeroResponse:
      return "zero_response";
    case ErrorCode::kAmbiguousResponse:
      return "ambiguous_response";
    case ErrorCode::kDomain:
      return "domain";
    case ErrorCode::kParse:
      return "parse";
    case ErrorCode::kIo:
      return "io";
    case ErrorCode::kDivergence:
      return "divergence";
  }
  return "unknown";
}

Matrix::Matrix(std::initializer_list<std::initializer_list<double>> rows)
    : rows_(rows.size()), cols_(rows.size() == 0 ? 0 : rows.begin()->size()) {
  data_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    if (r.size() != cols_) {
      throw Error(ErrorCode::kInvalidArgument, "ragged matrix literal");
    }
    data_.insert(data_.end(), r.begin(), r.end());
  }
}

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

void Matrix::append_row(std::span<const double> values) {
  if (rows_ == 0 && cols_ == 0) cols_ = values.size();
  if (values.size() != cols_) {
    throw Error(ErrorCode::kInvalidArgument,
                "append_row: expected " + std::to_string(cols_) +
                    " columns, got " + std::to_string(values.size()));
  }
  data_.insert(data_.end(), values.begin(), values.end());
  ++rows_;
}

Matrix Matrix::transposed() const {
  Matrix t(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r) {
    for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
  }
  return t;
}

std::vector<double> multiply(const Matrix& a, std::span<const double> x) {
  if (x.size() != a.cols()) {
    throw Error(ErrorCode::kInvalidArgument,
                "multiply: matrix has " + std::to_string(a.cols()) +
                    " columns but vector has " + std::to_string(x.size()));
  }
  std::vector<double> y(a.rows());
  for (std::size_t r = 0; r < a.rows(); ++r) y[r] = simd::dot(a.row(r), x);
  return y;
}

double norm2(std::span<const double> x) { return std::sqrt(simd::dot(x, x)); }

double norm1(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += std::abs(v);
  return s;
}

}  // namespace fairquery
