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

#ifndef FAIRQUERY_HARNESS_EXPERIMENT_H_
#define FAIRQUERY_HARNESS_EXPERIMENT_H_

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fairquery/fairness.h"
#include "fairquery/harness/dataset_io.h"
#include "fairquery/reconstruction.h"

namespace fairquery {

inline constexpr double kNoPrivacy = std::numeric_limits<double>::infinity();

struct ExperimentConfig {
  std::size_t n = 100;
  std::size_t n0 = 10;
  // Unset: n for full_rank, auto_query_count(n, n0, c) for compressed_sensing.
  std::optional<std::size_t> m;
  double c = 1.74;
  // +inf answers the queries without a mechanism.
  std::vector<double> epsilons{kNoPrivacy};
  Mechanism mechanism = Mechanism::kNone;
  Metric metric = Metric::kSp;
  Strategy attack = Strategy::kFullRank;
  SparseMethod solver = SparseMethod::kBasisPursuit;
  std::size_t trials = 1;
  std::uint64_t seed = 42;
  std::optional<double> delta;
  Sensing sensing = Sensing::kPerturbed;
  // Estimate group sizes with one extra (privatized) probe query instead of
  // handing the attack the true sizes.
  bool probe = false;
  // Record wall-clock time per trial; off keeps output files reproducible.
  bool timing = false;
  std::size_t threads = 1;
  // Tolerance for matching partition answers.
  double match_tol = 1e-9;

  // Throws kInvalidArgument on an inconsistent configuration.
  void validate() const;
};

// Reads a JSON object whose keys are the field names above. Epsilons may be
// numbers or the string "inf". Throws kParse on malformed JSON or an unknown
// key.
ExperimentConfig parse_config(std::string_view json_text);

struct ExperimentRow {
  std::size_t trial = 0;
  std::size_t n = 0;
  std::size_t n0 = 0;
  std::size_t m = 0;
  double epsilon = kNoPrivacy;
  Mechanism mechanism = Mechanism::kNone;
  double avg_sp_err = 0.0;
  double leakage_pct = 0.0;
  double runtime_ms = 0.0;
  // Set when the attack threw; leakage then scores a random guess.
  bool failed = false;
  std::string error;
};

// ceil(c * n0 * ln(n / n0)), at least n0 + 1.
std::size_t auto_query_count(std::size_t n, std::size_t n0, double c);

struct TrialOutcome {
  ExperimentRow row;
  std::vector<Recovered> a_hat;
};

// One trial at one privacy level. Uses `source` when given, otherwise a
// synthetic dataset seeded by cfg.seed + trial.
TrialOutcome run_trial(const ExperimentConfig& cfg, double epsilon,
                       std::size_t trial, const TabularSource* source = nullptr);

// Every (epsilon, trial) pair, sorted by epsilon then trial.
std::vector<ExperimentRow> run_experiment(const ExperimentConfig& cfg,
                                          const TabularSource* source = nullptr);

}  // namespace fairquery

#endif  // FAIRQUERY_HARNESS_EXPERIMENT_H_
