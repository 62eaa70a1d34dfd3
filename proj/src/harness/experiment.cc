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

#include "fairquery/harness/experiment.h"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <mutex>
#include <numeric>
#include <thread>

#include <json.hpp>

#include "fairquery/error.h"
#include "fairquery/harness/synthetic.h"
#include "fairquery/privacy.h"
#include "fairquery/rng.h"

namespace fairquery {
namespace {

using Json = nlohmann::json;

// Sub-streams of a trial seed.
enum Stream : std::uint64_t {
  kPlanStream = 1,
  kNoiseStream = 2,
  kGuessStream = 3,
};

Error invalid(const std::string& what) {
  return Error(ErrorCode::kInvalidArgument, "config: " + what);
}

double noise_quantile(Mechanism mechanism, double u) {
  return mechanism == Mechanism::kCauchySmooth ? cauchy_from_uniform(u)
                                               : laplace_from_uniform(u);
}

std::vector<double> select(std::span<const double> values,
                           std::span<const std::size_t> idx) {
  std::vector<double> out;
  out.reserve(idx.size());
  for (std::size_t j : idx) out.push_back(values[j]);
  return out;
}

double mean_abs_diff(std::span<const double> a, std::span<const double> b) {
  if (a.empty()) return 0.0;
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += std::abs(a[i] - b[i]);
  return acc / static_cast<double>(a.size());
}

// Everything a trial needs about the attacked population.
struct AttackedPopulation {
  std::vector<std::size_t> columns;  // dataset indices, ascending
  Population sizes;
};

AttackedPopulation attacked_population(const Dataset& ds, Metric metric) {
  AttackedPopulation p;
  if (is_equal_opportunity(metric)) {
    p.columns = ds.positive_indices();
    p.sizes = {ds.n_positive(), ds.n0_positive(), ds.n1_positive()};
  } else {
    p.columns.resize(ds.n());
    std::iota(p.columns.begin(), p.columns.end(), std::size_t{0});
    p.sizes = {ds.n(), ds.n0(), ds.n1()};
  }
  if (p.sizes.n0 == 0 || p.sizes.n1 == 0) {
    throw Error(ErrorCode::kEmptyGroup,
                "attacked population has an empty group (N1 = " +
                    std::to_string(p.sizes.n1) +
                    ", N0 = " + std::to_string(p.sizes.n0) + ")");
  }
  return p;
}

std::vector<Recovered> random_guess(const Dataset& ds,
                                    std::span<const std::size_t> columns,
                                    std::uint64_t seed) {
  SplitMix64 rng(seed);
  std::vector<Recovered> out(ds.n(), Recovered::kUnknown);
  for (std::size_t j : columns) {
    out[j] = rng.bernoulli(0.5) ? Recovered::kAdvantaged
                                : Recovered::kDisadvantaged;
  }
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------

void ExperimentConfig::validate() const {
  if (trials < 1) throw invalid("trials must be >= 1");
  if (n0 < 1 || n0 >= n) throw invalid("need 1 <= n0 < n");
  if (!(c > 0.0)) throw invalid("c must be > 0");
  if (threads < 1) throw invalid("threads must be >= 1");
  if (epsilons.empty()) throw invalid("epsilons is empty");
  for (double e : epsilons) {
    if (!(e > 0.0)) throw invalid("every epsilon must be > 0");
  }
  if (m && *m < 1) throw invalid("m must be >= 1");
  if (!(match_tol >= 0.0)) throw invalid("match_tol must be >= 0");
  switch (attack) {
    case Strategy::kFullRank:
    case Strategy::kCompressedSensing:
      if (is_absolute(metric)) {
        throw invalid("attack " + std::string(strategy_name(attack)) +
                      " needs a signed metric (SP or EO)");
      }
      break;
    case Strategy::kAbsPartition:
      if (metric != Metric::kAbsSp) {
        throw invalid("abs_partition runs on ABS_SP answers");
      }
      break;
    default:
      throw invalid("attack " + std::string(strategy_name(attack)) +
                    " cannot be swept");
  }
  if (attack == Strategy::kFullRank && m && !is_equal_opportunity(metric) &&
      *m != n) {
    throw invalid("full_rank uses m = n");
  }
  if (mechanism == Mechanism::kLaplaceSmooth) {
    if (!delta || !(*delta > 0.0 && *delta < 1.0)) {
      throw invalid("laplace_smooth needs delta in (0, 1)");
    }
    if (is_absolute(metric)) {
      throw invalid("laplace_smooth is defined for SP and EO only");
    }
  }
}

ExperimentConfig parse_config(std::string_view json_text) {
  Json j;
  try {
    j = Json::parse(json_text);
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::kParse, std::string("config JSON: ") + e.what());
  }
  if (!j.is_object()) {
    throw Error(ErrorCode::kParse, "config JSON must be an object");
  }
  const auto epsilon_of = [](const Json& v) {
    if (v.is_string()) {
      const std::string s = v.get<std::string>();
      if (s == "inf" || s == "Infinity" || s == "infinity") return kNoPrivacy;
      throw Error(ErrorCode::kParse, "epsilon '" + s + "' is not a number");
    }
    return v.get<double>();
  };

  ExperimentConfig cfg;
  try {
    for (const auto& [key, v] : j.items()) {
      if (key == "n") {
        cfg.n = v.get<std::size_t>();
      } else if (key == "n0") {
        cfg.n0 = v.get<std::size_t>();
      } else if (key == "m") {
        if (v.is_null() || (v.is_string() && v.get<std::string>() == "auto")) {
          cfg.m.reset();
        } else {
          cfg.m = v.get<std::size_t>();
        }
      } else if (key == "c") {
        cfg.c = v.get<double>();
      } else if (key == "epsilons") {
        cfg.epsilons.clear();
        if (v.is_array()) {
          for (const auto& e : v) cfg.epsilons.push_back(epsilon_of(e));
        } else {
          cfg.epsilons.push_back(epsilon_of(v));
        }
      } else if (key == "mechanism") {
        cfg.mechanism = parse_mechanism(v.get<std::string>());
      } else if (key == "metric") {
        cfg.metric = parse_metric(v.get<std::string>());
      } else if (key == "attack") {
        cfg.attack = parse_strategy(v.get<std::string>());
      } else if (key == "solver") {
        cfg.solver = parse_sparse_method(v.get<std::string>());
      } else if (key == "trials") {
        cfg.trials = v.get<std::size_t>();
      } else if (key == "seed") {
        cfg.seed = v.get<std::uint64_t>();
      } else if (key == "delta") {
        if (v.is_null()) {
          cfg.delta.reset();
        } else {
          cfg.delta = v.get<double>();
        }
      } else if (key == "sensing") {
        const std::string s = v.get<std::string>();
        if (s == "perturbed") {
          cfg.sensing = Sensing::kPerturbed;
        } else if (s == "binary") {
          cfg.sensing = Sensing::kBinary;
        } else {
          throw Error(ErrorCode::kParse, "sensing must be perturbed or binary");
        }
      } else if (key == "probe") {
        cfg.probe = v.get<bool>();
      } else if (key == "timing") {
        cfg.timing = v.get<bool>();
      } else if (key == "threads") {
        cfg.threads = v.get<std::size_t>();
      } else if (key == "match_tol") {
        cfg.match_tol = v.get<double>();
      } else {
        throw Error(ErrorCode::kParse, "unknown config key '" + key + "'");
      }
    }
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::kParse, std::string("config value: ") + e.what());
  }
  cfg.validate();
  return cfg;
}

std::size_t auto_query_count(std::size_t n, std::size_t n0, double c) {
  if (n0 < 1 || n0 >= n || !(c > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument,
                "auto_query_count needs 1 <= n0 < n and c > 0");
  }
  const double raw = std::ceil(c * static_cast<double>(n0) *
                               std::log(static_cast<double>(n) /
                                        static_cast<double>(n0)));
  return std::max(static_cast<std::size_t>(raw), n0 + 1);
}

// ---------------------------------------------------------------------------

TrialOutcome run_trial(const ExperimentConfig& cfg, double epsilon,
                       std::size_t trial, const TabularSource* source) {
  const auto start = std::chrono::steady_clock::now();
  const std::uint64_t seed = cfg.seed + trial;

  std::optional<SyntheticData> synthetic;
  if (!source) synthetic = gen_synthetic(cfg.n, cfg.n0, seed);
  const Dataset& ds = source ? source->dataset : synthetic->dataset;
  const std::vector<double>& base =
      source ? source->base_row : synthetic->base_row;
  const AttackedPopulation pop = attacked_population(ds, cfg.metric);

  const bool noisy = cfg.mechanism != Mechanism::kNone && !std::isinf(epsilon);
  const Mechanism mechanism = noisy ? cfg.mechanism : Mechanism::kNone;

  TrialOutcome out;
  ExperimentRow& row = out.row;
  row.trial = trial;
  row.n = ds.n();
  row.n0 = ds.n0();
  row.epsilon = epsilon;
  row.mechanism = mechanism;

  if (cfg.attack == Strategy::kAbsPartition) {
    const std::size_t budget = pop.sizes.n;
    const double scale = noisy ? mechanism_scale(mechanism, cfg.metric, budget,
                                                 pop.sizes, epsilon, cfg.delta)
                               : 0.0;
    SplitMix64 noise(SplitMix64::derive(seed, kNoiseStream));
    double abs_err = 0.0;
    std::size_t asked = 0;
    const AnswerFn answer = [&](std::span<const double> r) {
      const double clean = evaluate(ds, r, Metric::kAbsSp);
      const double e =
          noisy ? scale * noise_quantile(mechanism, noise.uniform_open()) : 0.0;
      abs_err += std::abs(e);
      ++asked;
      return clean + e;
    };
    try {
      const PartitionResult part = partition_abs_sp(ds.n(), answer,
                                                    cfg.match_tol);
      out.a_hat = partition_attributes(part);
      row.leakage_pct = leakage(ds.a(), out.a_hat);
    } catch (const Error& e) {
      row.failed = true;
      row.error = e.what();
    }
    row.m = asked;
    row.avg_sp_err = asked ? abs_err / static_cast<double>(asked) : 0.0;
  } else {
    const std::vector<double> sub_base = select(base, pop.columns);
    const std::uint64_t plan_seed = SplitMix64::derive(seed, kPlanStream);
    AttackPlan plan = [&] {
      if (cfg.attack == Strategy::kFullRank) {
        if (cfg.m && *cfg.m != pop.sizes.n) {
          throw invalid("full_rank uses m = " + std::to_string(pop.sizes.n));
        }
        std::vector<double> binary(sub_base.size());
        for (std::size_t j = 0; j < binary.size(); ++j) {
          binary[j] = sub_base[j] >= 0.5 ? 1.0 : 0.0;
        }
        // A base row with a single 1 makes the flip matrix singular; accepting
        // one more individual restores full rank.
        if (std::count(binary.begin(), binary.end(), 1.0) == 1) {
          *std::find(binary.begin(), binary.end(), 0.0) = 1.0;
        }
        return plan_full_rank(binary);
      }
      const std::size_t m =
          cfg.m ? *cfg.m
                : auto_query_count(pop.sizes.n,
                                   std::min(pop.sizes.n0, pop.sizes.n1), cfg.c);
      return cfg.sensing == Sensing::kBinary
                 ? plan_binary_sensing(pop.sizes.n, m, plan_seed)
                 : plan_compressed_sensing(sub_base, m, plan_seed);
    }();
    plan.probe_included = cfg.probe;
    const std::size_t m = plan.matrix.m();

    // Queries over the whole dataset; the probe, when used, is the last row.
    Matrix posed = embed_columns(plan.matrix, pop.columns, ds.n()).h();
    if (cfg.probe) {
      std::vector<double> probe(ds.n(), 0.0);
      probe[pop.columns.front()] = 1.0;
      posed.append_row(probe);
    }
    const QueryBatch clean = metric_batch(
        ds, PredictionMatrix(std::move(posed), plan.matrix.kind()), cfg.metric);
    const QueryBatch answered =
        noisy ? privatize(clean, mechanism, pop.sizes, epsilon, cfg.delta,
                          SplitMix64::derive(seed, kNoiseStream))
              : clean;
    row.m = clean.values.size();
    row.avg_sp_err = mean_abs_diff(answered.values, clean.values);

    try {
      std::size_t n1 = pop.sizes.n1;
      std::size_t n0 = pop.sizes.n0;
      if (cfg.probe) {
        const double probe_answer = answered.values.back();
        const GroupSizeEstimate est = probe_group_sizes(
            pop.sizes.n, [&](std::span<const double>) { return probe_answer; });
        n1 = est.n1;
        n0 = est.n0;
      }
      QueryBatch attack_answers = answered;
      attack_answers.values.resize(m);

      RevealOptions options;
      options.solver = cfg.solver;
      if (noisy && cfg.solver == SparseMethod::kBasisPursuit) {
        const double scale = mechanism_scale(mechanism, cfg.metric,
                                             clean.values.size(), pop.sizes,
                                             epsilon, cfg.delta);
        options.solver_options.eq_tol =
            std::max(options.solver_options.eq_tol,
                     10.0 * median_abs_noise(mechanism, scale));
      }
      ReconstructionReport report;
      if (is_equal_opportunity(cfg.metric)) {
        report = reveal_equal_opportunity(plan, attack_answers, ds, n1, n0,
                                          options);
      } else if (cfg.attack == Strategy::kFullRank) {
        report = reveal_full_rank(plan, attack_answers, n1, n0);
      } else {
        report = reveal_compressed_sensing(plan, attack_answers, n1, n0,
                                           options);
      }
      score(report, ds.a());
      row.leakage_pct = *report.leakage_pct;
      out.a_hat = std::move(report.a_hat);
    } catch (const Error& e) {
      row.failed = true;
      row.error = e.what();
    }
  }

  if (row.failed) {
    out.a_hat = random_guess(ds, pop.columns,
                             SplitMix64::derive(seed, kGuessStream));
    row.leakage_pct = leakage(ds.a(), out.a_hat);
  }
  if (cfg.timing) {
    row.runtime_ms = std::chrono::duration<double, std::milli>(
                         std::chrono::steady_clock::now() - start)
                         .count();
  }
  return out;
}

std::vector<ExperimentRow> run_experiment(const ExperimentConfig& cfg,
                                          const TabularSource* source) {
  cfg.validate();
  struct Job {
    double epsilon;
    std::size_t trial;
  };
  std::vector<double> epsilons = cfg.epsilons;
  std::stable_sort(epsilons.begin(), epsilons.end());
  std::vector<Job> jobs;
  for (double e : epsilons) {
    for (std::size_t t = 0; t < cfg.trials; ++t) jobs.push_back({e, t});
  }

  std::vector<ExperimentRow> rows(jobs.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;
  const auto worker = [&] {
    for (std::size_t k = next++; k < jobs.size(); k = next++) {
      try {
        rows[k] = run_trial(cfg, jobs[k].epsilon, jobs[k].trial, source).row;
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
        next = jobs.size();
      }
    }
  };
  const std::size_t workers = std::min(cfg.threads, jobs.size());
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (first_error) std::rethrow_exception(first_error);
  return rows;
}

}  // namespace fairquery
