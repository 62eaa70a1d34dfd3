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

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <vector>

#include <gtest/gtest.h>

#include "fairquery/error.h"
#include "fairquery/harness/baseline.h"
#include "fairquery/harness/dataset_io.h"
#include "fairquery/harness/experiment.h"
#include "fairquery/harness/results.h"
#include "fairquery/harness/synthetic.h"
#include "fairquery/rng.h"

namespace fairquery {
namespace {

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected an error";
  return ErrorCode::kInvalidArgument;
}

std::string message_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.what();
  }
  return "";
}

TabularSource read(const std::string& text, SourceMode mode = SourceMode::kScores,
                   const ValueMapping& mapping = {}) {
  std::istringstream in(text);
  return read_tabular(in, mode, mapping, "data.csv");
}

std::string to_csv(const std::vector<ExperimentRow>& rows) {
  std::ostringstream out;
  write_results(out, rows, ResultFormat::kCsv);
  return out.str();
}

// ---------------------------------------------------------------------------
// Synthetic data

TEST(GenSynthetic, ExactDisadvantagedCount) {
  const SyntheticData d = gen_synthetic(10, 3, 1);
  EXPECT_EQ(std::count(d.dataset.a().begin(), d.dataset.a().end(), 0), 3);
  EXPECT_EQ(d.base_row.size(), 10u);
  for (double s : d.base_row) {
    EXPECT_GT(s, 0.0);
    EXPECT_LT(s, 1.0);
  }
}

TEST(GenSynthetic, Deterministic) {
  const SyntheticData a = gen_synthetic(50, 7, 9);
  const SyntheticData b = gen_synthetic(50, 7, 9);
  EXPECT_TRUE(std::equal(a.dataset.a().begin(), a.dataset.a().end(), b.dataset.a().begin()));
  EXPECT_TRUE(std::equal(a.dataset.y().begin(), a.dataset.y().end(), b.dataset.y().begin()));
  EXPECT_EQ(a.base_row, b.base_row);
}

TEST(GenSynthetic, PositionsAreUniform) {
  const std::size_t n = 20, n0 = 5;
  std::vector<int> hits(n, 0);
  for (std::uint64_t seed = 0; seed < 1000; ++seed) {
    const SyntheticData d = gen_synthetic(n, n0, seed);
    for (std::size_t j = 0; j < n; ++j) hits[j] += d.dataset.a()[j] == 0;
  }
  for (std::size_t j = 0; j < n; ++j) {
    EXPECT_NEAR(hits[j] / 1000.0, double(n0) / double(n), 0.05) << "position " << j;
  }
}

TEST(GenSynthetic, Preconditions) {
  EXPECT_EQ(code_of([] { gen_synthetic(10, 0, 1); }), ErrorCode::kInvalidArgument);
  EXPECT_EQ(code_of([] { gen_synthetic(10, 10, 1); }), ErrorCode::kInvalidArgument);
}

// ---------------------------------------------------------------------------
// CSV ingestion

TEST(ReadTabular, ScoresMode) {
  const TabularSource s = read("id,y,a,score\nu1,1,1,0.2\nu2,0,0,0.9\nu3,1,0,0.5\n");
  EXPECT_EQ(s.ids, (std::vector<std::string>{"u1", "u2", "u3"}));
  EXPECT_EQ(std::vector<std::uint8_t>(s.dataset.y().begin(), s.dataset.y().end()),
            (std::vector<std::uint8_t>{1, 0, 1}));
  EXPECT_EQ(std::vector<std::uint8_t>(s.dataset.a().begin(), s.dataset.a().end()),
            (std::vector<std::uint8_t>{1, 0, 0}));
  EXPECT_EQ(s.base_row, (std::vector<double>{0.2, 0.9, 0.5}));
}

TEST(ReadTabular, ValueMappingRoundTrip) {
  ValueMapping mapping;
  mapping.a = parse_value_map("White=1,Black=0");
  const TabularSource s =
      read("id,y,a,score\n1,1,White,0.3\n2,0,Black,0.4\n", SourceMode::kScores, mapping);
  EXPECT_EQ(s.dataset.a()[0], 1);
  EXPECT_EQ(s.dataset.a()[1], 0);
  std::ostringstream out;
  write_scores_csv(out, s.dataset, s.base_row);
  const TabularSource back = read(out.str());
  EXPECT_TRUE(std::equal(back.dataset.a().begin(), back.dataset.a().end(),
                         s.dataset.a().begin()));
  EXPECT_EQ(back.base_row, s.base_row);
}

TEST(ReadTabular, MissingColumnIsNamed) {
  const std::string msg = message_of([] { read("id,y,score\n1,1,0.5\n"); });
  EXPECT_NE(msg.find("missing required column 'a'"), std::string::npos) << msg;
  EXPECT_EQ(code_of([] { read("id,y,score\n1,1,0.5\n"); }), ErrorCode::kParse);
}

TEST(ReadTabular, ErrorsCarryLineNumbers) {
  const std::string msg =
      message_of([] { read("id,y,a,score\n1,1,0,0.5\n2,1,2,0.5\n"); });
  EXPECT_NE(msg.find("data.csv:3:"), std::string::npos) << msg;
  EXPECT_NE(message_of([] { read("id,y,a,score\n1,1,0,abc\n"); }).find("data.csv:2:"),
            std::string::npos);
  EXPECT_EQ(code_of([] { read("id,y,a,score\n1,1,0,1.5\n2,1,1,0.5\n"); }),
            ErrorCode::kParse);
  EXPECT_EQ(code_of([] { read("id,y,a,score\n1,1,0\n"); }), ErrorCode::kParse);
}

TEST(ReadTabular, SingleGroupIsEmptyGroupError) {
  EXPECT_EQ(code_of([] { read("id,y,a,score\n1,1,1,0.5\n2,0,1,0.5\n"); }),
            ErrorCode::kEmptyGroup);
}

TEST(ReadTabular, FeaturesModeTrainsBaseline) {
  const TabularSource s = read(
      "id,y,a,f1,f2\n1,0,1,-2,0\n2,0,0,-1,1\n3,1,1,1,0\n4,1,0,2,1\n",
      SourceMode::kFeatures);
  EXPECT_EQ(s.feature_names, (std::vector<std::string>{"f1", "f2"}));
  ASSERT_EQ(s.base_row.size(), 4u);
  EXPECT_LT(s.base_row[0], 0.5);
  EXPECT_GT(s.base_row[3], 0.5);
}

TEST(IngestCsv, MissingFileIsIoError) {
  EXPECT_EQ(code_of([] { ingest_csv("/nonexistent/data.csv", SourceMode::kScores); }),
            ErrorCode::kIo);
}

TEST(ParseValueMap, RejectsMalformedEntries) {
  EXPECT_EQ(code_of([] { parse_value_map("White"); }), ErrorCode::kParse);
  EXPECT_EQ(code_of([] { parse_value_map("White=2"); }), ErrorCode::kParse);
}

// ---------------------------------------------------------------------------
// Baseline

TEST(TrainBaseline, SeparableToySet) {
  const Matrix x{{-2, -1}, {-1, -2}, {1, 2}, {2, 1}};
  const std::vector<std::uint8_t> y{0, 0, 1, 1};
  const auto scores = train_baseline(x, y);
  for (std::size_t i = 0; i < 4; ++i) EXPECT_EQ(scores[i] >= 0.5, y[i] == 1);
}

TEST(TrainBaseline, ZeroEpochsGivesHalf) {
  const Matrix x{{1, 2}, {3, 4}, {5, 0}};
  const std::vector<std::uint8_t> y{0, 1, 1};
  for (double s : train_baseline(x, y, BaselineOptions{0, 0.5})) EXPECT_EQ(s, 0.5);
}

TEST(TrainBaseline, IndependentLabelsGiveMajorityAccuracy) {
  SplitMix64 rng(6);
  const std::size_t n = 2000;
  Matrix x(n, 3);
  for (double& v : x.data()) v = rng.uniform(-1, 1);
  std::vector<std::uint8_t> y(n);
  for (auto& v : y) v = rng.bernoulli(0.7);
  const auto scores = train_baseline(x, y);
  std::size_t correct = 0;
  for (std::size_t i = 0; i < n; ++i) correct += (scores[i] >= 0.5) == (y[i] == 1);
  const double majority = double(std::count(y.begin(), y.end(), 1)) / double(n);
  EXPECT_NEAR(double(correct) / double(n), majority, 0.03);
}

TEST(TrainBaseline, NonFiniteLossDiverges) {
  const Matrix x{{0}, {1}, {-1}};
  const std::vector<std::uint8_t> y{1, 0, 1};
  const double step = std::numeric_limits<double>::infinity();
  EXPECT_EQ(code_of([&] { train_baseline(x, y, BaselineOptions{5, step}); }),
            ErrorCode::kDivergence);
}

// ---------------------------------------------------------------------------
// Query count

TEST(AutoQueryCount, Examples) {
  EXPECT_EQ(auto_query_count(1000, 10, 1.3), 60u);
  EXPECT_EQ(auto_query_count(100, 10, 1.74), 41u);
  EXPECT_EQ(auto_query_count(50, 49, 1.0), 50u);
}

TEST(AutoQueryCount, Monotone) {
  for (std::size_t n : {50, 100, 1000}) {
    std::size_t prev = 0;
    for (std::size_t n0 = 1; double(n0) <= double(n) / std::exp(1.0); ++n0) {
      const std::size_t m = auto_query_count(n, n0, 1.5);
      EXPECT_GE(m, prev);
      prev = m;
    }
    prev = 0;
    for (double c = 0.1; c < 5.0; c += 0.1) {
      const std::size_t m = auto_query_count(n, 10, c);
      EXPECT_GE(m, prev);
      prev = m;
    }
  }
}

// ---------------------------------------------------------------------------
// Experiments

TEST(RunExperiment, FullRankIsExactWithoutMechanism) {
  for (auto [n, n0] : std::vector<std::pair<std::size_t, std::size_t>>{
           {5, 1}, {20, 10}, {60, 7}, {100, 99}}) {
    ExperimentConfig cfg;
    cfg.n = n;
    cfg.n0 = n0;
    cfg.trials = 3;
    for (const ExperimentRow& row : run_experiment(cfg)) {
      EXPECT_EQ(row.leakage_pct, 100.0) << "n=" << n << " n0=" << n0;
      EXPECT_EQ(row.avg_sp_err, 0.0);
      EXPECT_FALSE(row.failed) << row.error;
      EXPECT_EQ(row.m, n);
    }
  }
}

TEST(RunExperiment, CompressedSensingWithoutMechanism) {
  ExperimentConfig cfg;
  cfg.attack = Strategy::kCompressedSensing;
  cfg.m = 40;
  cfg.trials = 5;
  int perfect = 0;
  for (const ExperimentRow& row : run_experiment(cfg)) {
    EXPECT_EQ(row.avg_sp_err, 0.0);
    perfect += row.leakage_pct == 100.0;
  }
  EXPECT_GE(perfect, 4);
}

TEST(RunExperiment, RowsOrderedByEpsilonThenTrial) {
  ExperimentConfig cfg;
  cfg.n = 30;
  cfg.n0 = 5;
  cfg.mechanism = Mechanism::kLaplaceGlobal;
  cfg.epsilons = {10.0, kNoPrivacy, 1.0};
  cfg.trials = 3;
  cfg.threads = 3;
  const auto rows = run_experiment(cfg);
  ASSERT_EQ(rows.size(), 9u);
  const std::vector<double> eps{1.0, 10.0, kNoPrivacy};
  for (std::size_t k = 0; k < rows.size(); ++k) {
    EXPECT_EQ(rows[k].epsilon, eps[k / 3]);
    EXPECT_EQ(rows[k].trial, k % 3);
  }
  EXPECT_EQ(rows.back().avg_sp_err, 0.0);
  EXPECT_GT(rows.front().avg_sp_err, 0.0);
}

TEST(RunExperiment, ByteIdenticalAcrossRunsAndThreadCounts) {
  ExperimentConfig cfg;
  cfg.attack = Strategy::kCompressedSensing;
  cfg.mechanism = Mechanism::kCauchySmooth;
  cfg.epsilons = {50.0, 500.0};
  cfg.m = 30;
  cfg.trials = 4;
  const std::string first = to_csv(run_experiment(cfg));
  cfg.threads = 4;
  EXPECT_EQ(to_csv(run_experiment(cfg)), first);
  cfg.seed = 43;
  EXPECT_NE(to_csv(run_experiment(cfg)), first);
}

TEST(RunExperiment, TrialSeedIsBasePlusIndex) {
  ExperimentConfig cfg;
  cfg.mechanism = Mechanism::kLaplaceGlobal;
  cfg.epsilons = {5.0};
  cfg.n = 30;
  cfg.n0 = 5;
  cfg.trials = 3;
  const auto rows = run_experiment(cfg);
  cfg.seed += 2;
  const TrialOutcome shifted = run_trial(cfg, 5.0, 0);
  EXPECT_EQ(shifted.row.avg_sp_err, rows[2].avg_sp_err);
  EXPECT_EQ(shifted.row.leakage_pct, rows[2].leakage_pct);
}

TEST(RunExperiment, AbsPartitionRecoversCleanPartition) {
  ExperimentConfig cfg;
  cfg.attack = Strategy::kAbsPartition;
  cfg.metric = Metric::kAbsSp;
  cfg.n = 40;
  cfg.n0 = 8;
  cfg.trials = 3;
  for (const ExperimentRow& row : run_experiment(cfg)) {
    EXPECT_EQ(row.leakage_pct, 100.0);
    EXPECT_LE(row.m, 40u);
  }
}

TEST(RunExperiment, FailedTrialsAreScoredNotDropped) {
  ExperimentConfig cfg;
  cfg.attack = Strategy::kAbsPartition;
  cfg.metric = Metric::kAbsSp;
  cfg.mechanism = Mechanism::kCauchySmooth;
  cfg.epsilons = {1.0};
  cfg.n = 30;
  cfg.n0 = 6;
  cfg.trials = 4;
  const auto rows = run_experiment(cfg);
  ASSERT_EQ(rows.size(), 4u);
  for (const ExperimentRow& row : rows) {
    EXPECT_TRUE(row.failed);
    EXPECT_FALSE(row.error.empty());
    EXPECT_GE(row.leakage_pct, 0.0);
    EXPECT_LE(row.leakage_pct, 100.0);
  }
}

TEST(RunExperiment, ProbeAddsOneQuery) {
  ExperimentConfig cfg;
  cfg.n = 30;
  cfg.n0 = 5;
  cfg.probe = true;
  const TrialOutcome t = run_trial(cfg, kNoPrivacy, 0);
  EXPECT_EQ(t.row.leakage_pct, 100.0);
  EXPECT_EQ(t.row.m, 31u);
}

TEST(RunExperiment, ScoresSourceDrivesTheAttack) {
  const TabularSource s = read(
      "id,y,a,score\n1,1,1,0.9\n2,1,0,0.2\n3,0,1,0.6\n4,1,1,0.7\n5,0,0,0.1\n6,1,1,0.4\n");
  ExperimentConfig cfg;
  cfg.n = 6;
  cfg.n0 = 2;
  const auto rows = run_experiment(cfg, &s);
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_EQ(rows[0].leakage_pct, 100.0);
}

// ---------------------------------------------------------------------------
// Results

TEST(Results, OneRowIsTwoLines) {
  ExperimentRow row;
  row.n = 10;
  const std::string csv = to_csv({row});
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 2);
  EXPECT_EQ(csv.substr(0, kResultHeader.size()), kResultHeader);
  EXPECT_NE(csv.find(",inf,"), std::string::npos);
}

TEST(Results, CsvRoundTrip) {
  std::vector<ExperimentRow> rows(3);
  for (std::size_t k = 0; k < 3; ++k) {
    rows[k].trial = k;
    rows[k].n = 100;
    rows[k].n0 = 10;
    rows[k].m = 41;
    rows[k].epsilon = k == 2 ? kNoPrivacy : 0.123456789012 * double(k + 1);
    rows[k].mechanism = Mechanism::kCauchySmooth;
    rows[k].avg_sp_err = 1.0 / 3.0;
    rows[k].leakage_pct = 87.5;
    rows[k].runtime_ms = 12.25;
  }
  std::istringstream in(to_csv(rows));
  const auto back = read_results_csv(in);
  ASSERT_EQ(back.size(), 3u);
  for (std::size_t k = 0; k < 3; ++k) {
    EXPECT_EQ(back[k].trial, rows[k].trial);
    EXPECT_EQ(back[k].m, 41u);
    EXPECT_EQ(back[k].mechanism, Mechanism::kCauchySmooth);
    if (std::isinf(rows[k].epsilon)) {
      EXPECT_TRUE(std::isinf(back[k].epsilon));
    } else {
      EXPECT_NEAR(back[k].epsilon, rows[k].epsilon, 1e-12 * rows[k].epsilon);
    }
    EXPECT_NEAR(back[k].avg_sp_err, 1.0 / 3.0, 1e-12);
    EXPECT_EQ(back[k].leakage_pct, 87.5);
  }
}

TEST(Results, JsonUsesTheSameKeys) {
  ExperimentRow row;
  std::ostringstream out;
  write_results(out, std::vector<ExperimentRow>{row}, ResultFormat::kJson);
  const std::string text = out.str();
  for (const char* key : {"\"trial\"", "\"n\"", "\"n0\"", "\"m\"", "\"epsilon\"",
                          "\"mechanism\"", "\"avg_sp_err\"", "\"leakage_pct\"",
                          "\"runtime_ms\""}) {
    EXPECT_NE(text.find(key), std::string::npos) << key;
  }
  EXPECT_NE(text.find("\"inf\""), std::string::npos);
}

TEST(Results, EmitErrors) {
  EXPECT_EQ(code_of([] { emit_results({}, ResultFormat::kCsv, "/tmp/x.csv"); }),
            ErrorCode::kInvalidArgument);
  const std::vector<ExperimentRow> rows(1);
  const std::string msg = message_of(
      [&] { emit_results(rows, ResultFormat::kCsv, "/nonexistent/dir/rows.csv"); });
  EXPECT_NE(msg.find("/nonexistent/dir/rows.csv"), std::string::npos);
}

// ---------------------------------------------------------------------------
// Config

TEST(ParseConfig, ReadsEveryKey) {
  const ExperimentConfig cfg = parse_config(R"({
    "n": 200, "n0": 20, "m": "auto", "c": 2.0, "epsilons": [1, "inf"],
    "mechanism": "cauchy_smooth", "metric": "SP", "attack": "compressed_sensing",
    "solver": "omp", "trials": 3, "seed": 7, "delta": null, "sensing": "binary",
    "probe": true, "timing": false, "threads": 2, "match_tol": 1e-6})");
  EXPECT_EQ(cfg.n, 200u);
  EXPECT_FALSE(cfg.m.has_value());
  EXPECT_EQ(cfg.epsilons, (std::vector<double>{1.0, kNoPrivacy}));
  EXPECT_EQ(cfg.mechanism, Mechanism::kCauchySmooth);
  EXPECT_EQ(cfg.attack, Strategy::kCompressedSensing);
  EXPECT_EQ(cfg.solver, SparseMethod::kOmp);
  EXPECT_EQ(cfg.sensing, Sensing::kBinary);
  EXPECT_TRUE(cfg.probe);
  EXPECT_EQ(cfg.threads, 2u);
}

TEST(ParseConfig, Rejections) {
  EXPECT_EQ(code_of([] { parse_config(R"({"colour": 1})"); }), ErrorCode::kParse);
  EXPECT_EQ(code_of([] { parse_config("{"); }), ErrorCode::kParse);
  EXPECT_EQ(code_of([] { parse_config(R"({"trials": 0})"); }),
            ErrorCode::kInvalidArgument);
  EXPECT_EQ(code_of([] { parse_config(R"({"n": 10, "n0": 10})"); }),
            ErrorCode::kInvalidArgument);
  EXPECT_EQ(code_of([] { parse_config(R"({"mechanism": "laplace_smooth"})"); }),
            ErrorCode::kInvalidArgument);
  EXPECT_EQ(code_of([] { parse_config(R"({"attack": "full_rank", "m": 5})"); }),
            ErrorCode::kInvalidArgument);
}

}  // namespace
}  // namespace fairquery
