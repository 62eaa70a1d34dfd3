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

#include <cmath>
#include <numeric>
#include <vector>

#include <gtest/gtest.h>

#include "fairquery/error.h"
#include "fairquery/fairness.h"
#include "test_util.h"

namespace fairquery {
namespace {

using testing::random_attributes;
using testing::unit_row;
using testing::with_attributes;

// n = 10, first four advantaged.
Dataset four_six() {
  return with_attributes({1, 1, 1, 1, 0, 0, 0, 0, 0, 0});
}

TEST(Dataset, CountsGroups) {
  const Dataset ds(std::vector<std::uint8_t>{1, 0, 1, 1},
                   std::vector<std::uint8_t>{1, 1, 0, 0});
  EXPECT_EQ(ds.n(), 4u);
  EXPECT_EQ(ds.n1(), 2u);
  EXPECT_EQ(ds.n0(), 2u);
  EXPECT_EQ(ds.n1_positive(), 1u);
  EXPECT_EQ(ds.n0_positive(), 2u);
  EXPECT_EQ(ds.positive_indices(), (std::vector<std::size_t>{0, 2, 3}));
}

TEST(Dataset, RejectsNonBinaryAndMismatchedInputs) {
  EXPECT_THROW(Dataset({1, 2}, {0, 1}), Error);
  EXPECT_THROW(Dataset({1, 0}, {0, 3}), Error);
  EXPECT_THROW(Dataset({1, 0, 1}, {0, 1}), Error);
  EXPECT_THROW(Dataset({1, 0}, {0, 1}, Matrix(3, 2)), Error);
}

TEST(PredictionMatrix, EnforcesRange) {
  EXPECT_THROW(PredictionMatrix(Matrix{{0.0, 0.5}}, PredictionKind::kBinary),
               Error);
  EXPECT_THROW(PredictionMatrix(Matrix{{0.0, 1.5}}, PredictionKind::kLogistic),
               Error);
  EXPECT_NO_THROW(
      PredictionMatrix(Matrix{{0.0, 0.5}}, PredictionKind::kLogistic));
}

TEST(StatisticalParity, AllAcceptedIsZero) {
  const Dataset ds = four_six();
  EXPECT_EQ(statistical_parity(ds, std::vector<double>(10, 1.0)), 0.0);
}

TEST(StatisticalParity, SingleAcceptorRevealsGroupSize) {
  const Dataset ds = four_six();
  EXPECT_DOUBLE_EQ(statistical_parity(ds, unit_row(10, 0)), 0.25);
  EXPECT_DOUBLE_EQ(statistical_parity(ds, unit_row(10, 7)), -1.0 / 6.0);
}

TEST(StatisticalParity, EmptyGroupAndLengthErrors) {
  const Dataset one_group = with_attributes({1, 1, 1});
  try {
    statistical_parity(one_group, std::vector<double>(3, 0.0));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kEmptyGroup);
  }
  EXPECT_THROW(statistical_parity(four_six(), std::vector<double>(9, 0.0)),
               Error);
}

TEST(EqualOpportunity, AllPositiveEqualsStatisticalParity) {
  SplitMix64 rng(3);
  const Dataset ds = with_attributes(random_attributes(15, rng));
  std::vector<double> row(15);
  for (double& v : row) v = rng.uniform(0, 1);
  EXPECT_EQ(equal_opportunity(ds, row), statistical_parity(ds, row));
}

TEST(EqualOpportunity, OnlyNegativesAcceptedIsZero) {
  const Dataset ds({1, 0, 1, 0, 1, 0}, {1, 1, 0, 0, 1, 0});
  EXPECT_EQ(equal_opportunity(ds, std::vector<double>{0, 1, 0, 1, 0, 1}), 0.0);
}

TEST(EqualOpportunity, ConditionsOnPositiveLabels) {
  // Positives: individuals 0, 1 (advantaged) and 2, 3 (disadvantaged).
  const Dataset ds({1, 1, 1, 1, 0, 0}, {1, 1, 0, 0, 1, 0});
  EXPECT_DOUBLE_EQ(equal_opportunity(ds, unit_row(6, 0)), 0.5);
}

TEST(EqualOpportunity, EmptyPositiveGroupErrors) {
  const Dataset ds({1, 1, 0}, {1, 1, 0});
  try {
    equal_opportunity(ds, std::vector<double>(3, 0.0));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kEmptyGroup);
  }
}

TEST(MetricBatch, AbsoluteDropsSigns) {
  const Dataset ds = four_six();
  Matrix h(2, 10);
  h(0, 0) = 1.0;
  h(1, 7) = 1.0;
  const QueryBatch b =
      metric_batch(ds, PredictionMatrix(h, PredictionKind::kBinary),
                   Metric::kAbsSp);
  ASSERT_EQ(b.values.size(), 2u);
  EXPECT_DOUBLE_EQ(b.values[0], 0.25);
  EXPECT_DOUBLE_EQ(b.values[1], 1.0 / 6.0);
  EXPECT_FALSE(b.privatized);
  EXPECT_EQ(b.metric, Metric::kAbsSp);
}

TEST(MetricBatch, SingletonMatchesScalarAndEmptyIsEmpty) {
  const Dataset ds = four_six();
  Matrix h(1, 10, 0.3);
  h(0, 2) = 0.9;
  const QueryBatch one =
      metric_batch(ds, PredictionMatrix(h, PredictionKind::kLogistic),
                   Metric::kSp);
  EXPECT_EQ(one.values[0], statistical_parity(ds, h.row(0)));
  const QueryBatch none = metric_batch(
      ds, PredictionMatrix(Matrix(0, 10), PredictionKind::kBinary),
      Metric::kSp);
  EXPECT_TRUE(none.values.empty());
}

TEST(MetricBatch, ErrorsNameTheRow) {
  const Dataset ds({1, 1, 0}, {1, 1, 0});
  try {
    metric_batch(ds, PredictionMatrix(Matrix(2, 3), PredictionKind::kBinary),
                 Metric::kEo);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kEmptyGroup);
    EXPECT_NE(std::string(e.what()).find("row 0"), std::string::npos);
  }
}

TEST(Names, RoundTrip) {
  for (Metric m : {Metric::kSp, Metric::kAbsSp, Metric::kEo, Metric::kAbsEo}) {
    EXPECT_EQ(parse_metric(metric_name(m)), m);
  }
  for (Mechanism m : {Mechanism::kNone, Mechanism::kLaplaceGlobal,
                      Mechanism::kCauchySmooth, Mechanism::kLaplaceSmooth}) {
    EXPECT_EQ(parse_mechanism(mechanism_name(m)), m);
  }
  EXPECT_EQ(parse_metric("abs_sp"), Metric::kAbsSp);
  EXPECT_THROW(parse_metric("dp"), Error);
}

// ---------------------------------------------------------------------------
// Properties over random datasets.

class SpProperty : public ::testing::TestWithParam<std::uint64_t> {};

TEST_P(SpProperty, InvariantUnderJointPermutation) {
  SplitMix64 rng(GetParam());
  const std::size_t n = 2 + rng.below(40);
  std::vector<std::uint8_t> a = random_attributes(n, rng);
  std::vector<double> row(n);
  for (double& v : row) v = rng.uniform(0, 1);
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  shuffle(std::span<std::size_t>(perm), rng);
  std::vector<std::uint8_t> a2(n);
  std::vector<double> row2(n);
  for (std::size_t j = 0; j < n; ++j) {
    a2[j] = a[perm[j]];
    row2[j] = row[perm[j]];
  }
  EXPECT_NEAR(statistical_parity(with_attributes(a), row),
              statistical_parity(with_attributes(a2), row2), 1e-12);
}

TEST_P(SpProperty, PredictionChangeShiftsByGroupShare) {
  SplitMix64 rng(GetParam());
  const std::size_t n = 2 + rng.below(40);
  const Dataset ds = with_attributes(random_attributes(n, rng));
  std::vector<double> row(n);
  for (double& v : row) v = rng.uniform(0, 0.5);
  const std::size_t j = rng.below(n);
  const double delta = rng.uniform(0, 0.5);
  const double before = statistical_parity(ds, row);
  row[j] += delta;
  const double after = statistical_parity(ds, row);
  const double expected = ds.a()[j] ? delta / double(ds.n1())
                                    : -delta / double(ds.n0());
  EXPECT_NEAR(after - before, expected, 1e-12);
}

TEST_P(SpProperty, BoundedByOne) {
  SplitMix64 rng(GetParam());
  const std::size_t n = 2 + rng.below(40);
  std::vector<std::uint8_t> y(n);
  for (auto& v : y) v = 1;
  const Dataset ds(y, random_attributes(n, rng));
  std::vector<double> row(n);
  for (double& v : row) v = rng.bernoulli(0.5) ? 1.0 : 0.0;
  EXPECT_LE(std::abs(statistical_parity(ds, row)), 1.0);
  EXPECT_LE(std::abs(equal_opportunity(ds, row)), 1.0);
}

TEST_P(SpProperty, GroupSumsAgreeWithConditionalMeans) {
  SplitMix64 rng(GetParam());
  const std::size_t n = 2 + rng.below(60);
  const Dataset ds = with_attributes(random_attributes(n, rng));
  std::vector<double> row(n);
  for (double& v : row) v = rng.bernoulli(0.5) ? 1.0 : 0.0;
  double mean1 = 0.0, mean0 = 0.0;
  for (std::size_t j = 0; j < n; ++j) (ds.a()[j] ? mean1 : mean0) += row[j];
  mean1 /= double(ds.n1());
  mean0 /= double(ds.n0());
  const GroupSums s = group_sums(ds, row);
  EXPECT_LE(s.lambda, double(ds.n1()));
  EXPECT_LE(s.mu, double(ds.n0()));
  EXPECT_NEAR(statistical_parity(ds, row), mean1 - mean0, 1e-12);
}

INSTANTIATE_TEST_SUITE_P(Seeds, SpProperty, ::testing::Range<std::uint64_t>(0, 50));

}  // namespace
}  // namespace fairquery
