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

#include "fairquery/harness/cli.h"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "fairquery/error.h"
#include "fairquery/harness/dataset_io.h"
#include "fairquery/harness/experiment.h"
#include "fairquery/harness/results.h"
#include "fairquery/harness/synthetic.h"
#include "fairquery/privacy.h"

namespace fairquery {
namespace {

const std::vector<std::string> kMetrics{"sp", "abs_sp", "eo", "abs_eo",
                                        "SP", "ABS_SP", "EO", "ABS_EO"};
const std::vector<std::string> kMechanisms{"none", "laplace_global",
                                           "cauchy_smooth", "laplace_smooth"};
const std::vector<std::string> kAttacks{"full_rank", "compressed_sensing",
                                        "abs_partition"};

double parse_epsilon(const std::string& s) {
  if (s == "inf" || s == "infinity") return kNoPrivacy;
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != s.size() || used == 0) {
    throw Error(ErrorCode::kInvalidArgument,
                "epsilon '" + s + "' is not a number");
  }
  return v;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Runs `body` with `path` opened for writing, or with `fallback` when the
// path is empty.
template <typename Body>
void with_output(const std::string& path, std::ostream& fallback, Body body) {
  if (path.empty()) {
    body(fallback);
    return;
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) throw Error(ErrorCode::kIo, "cannot open " + path + " for writing");
  body(file);
  file.flush();
  if (!file) throw Error(ErrorCode::kIo, "write to " + path + " failed");
}

struct DataFlags {
  std::string path;
  std::string mode = "scores";
  std::string map_a;
  std::string map_y;

  void attach(CLI::App* app, bool required) {
    auto* opt = app->add_option("--data", path, "Dataset CSV");
    if (required) opt->required();
    app->add_option("--mode", mode, "Dataset layout")
        ->check(CLI::IsMember({"scores", "features"}));
    app->add_option("--map-a", map_a, "Attribute tokens, e.g. White=1,Black=0");
    app->add_option("--map-y", map_y, "Label tokens, e.g. >50K=1,<=50K=0");
  }

  TabularSource load() const {
    ValueMapping mapping;
    mapping.a = parse_value_map(map_a);
    mapping.y = parse_value_map(map_y);
    return ingest_csv(path, parse_source_mode(mode), mapping);
  }
};

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out,
            std::ostream& err) {
  CLI::App app{"Fairness-query attribute reveal and conceal toolkit",
               "fairquery"};
  app.require_subcommand(1);
  std::uint64_t seed = 42;

  // synth
  auto* synth = app.add_subcommand("synth", "Generate a synthetic dataset");
  std::size_t synth_n = 0, synth_n0 = 0;
  std::string synth_out;
  synth->add_option("--n", synth_n, "Dataset size")->required();
  synth->add_option("--n0", synth_n0, "Disadvantaged group size")->required();
  synth->add_option("--seed", seed, "PRNG seed");
  synth->add_option("--out", synth_out, "Output CSV (id,y,a,score)")
      ->required();

  // reveal
  auto* reveal = app.add_subcommand("reveal", "Run an attack on a dataset");
  DataFlags reveal_data;
  reveal_data.attach(reveal, true);
  ExperimentConfig rcfg;
  std::string r_attack = "full_rank", r_solver = "bp", r_metric = "sp",
              r_mechanism = "none", r_epsilon = "inf", r_sensing = "perturbed",
              r_out, r_recovered, r_format = "csv";
  std::optional<std::size_t> r_m;
  std::optional<double> r_delta;
  bool r_probe = false;
  reveal->add_option("--attack", r_attack)->check(CLI::IsMember(kAttacks));
  reveal->add_option("--solver", r_solver)->check(CLI::IsMember({"bp", "omp"}));
  reveal->add_option("--metric", r_metric)->check(CLI::IsMember(kMetrics));
  reveal->add_option("--mechanism", r_mechanism)
      ->check(CLI::IsMember(kMechanisms));
  reveal->add_option("--epsilon", r_epsilon, "Privacy level or inf");
  reveal->add_option("--delta", r_delta);
  reveal->add_option("--m", r_m, "Query count");
  reveal->add_option("--c", rcfg.c, "Query multiplier for automatic m");
  reveal->add_option("--sensing", r_sensing)
      ->check(CLI::IsMember({"perturbed", "binary"}));
  reveal->add_option("--match-tol", rcfg.match_tol);
  reveal->add_flag("--probe", r_probe, "Estimate group sizes with a probe");
  reveal->add_option("--seed", seed, "PRNG seed");
  reveal->add_option("--out", r_out, "Result file (stdout when omitted)");
  reveal->add_option("--format", r_format)
      ->check(CLI::IsMember({"csv", "json"}));
  reveal->add_option("--recovered", r_recovered,
                     "Write id,a_hat for every individual");

  // conceal
  auto* conceal = app.add_subcommand("conceal", "Privatize a query batch");
  std::string c_in, c_out, c_mechanism, c_epsilon;
  std::optional<double> c_delta;
  std::optional<std::size_t> c_n, c_n0, c_n1;
  conceal->add_option("--in", c_in, "Batch JSON {metric, values, n, n0, n1}")
      ->required();
  conceal->add_option("--mechanism", c_mechanism)
      ->required()
      ->check(CLI::IsMember(kMechanisms));
  conceal->add_option("--epsilon", c_epsilon)->required();
  conceal->add_option("--delta", c_delta);
  conceal->add_option("--n", c_n);
  conceal->add_option("--n0", c_n0);
  conceal->add_option("--n1", c_n1);
  conceal->add_option("--seed", seed, "PRNG seed");
  conceal->add_option("--out", c_out, "Output JSON (stdout when omitted)");

  // experiment
  auto* experiment = app.add_subcommand("experiment", "Run a sweep");
  std::string e_config, e_out, e_format = "csv";
  std::optional<std::size_t> e_threads;
  DataFlags experiment_data;
  experiment_data.attach(experiment, false);
  experiment->add_option("--config", e_config, "JSON config")->required();
  experiment->add_option("--out", e_out, "Result file (stdout when omitted)");
  experiment->add_option("--format", e_format)
      ->check(CLI::IsMember({"csv", "json"}));
  auto* e_seed_opt =
      experiment->add_option("--seed", seed, "Overrides the config seed");
  experiment->add_option("--threads", e_threads);

  // sensitivity
  auto* sensitivity =
      app.add_subcommand("sensitivity", "Print a sensitivity bound");
  std::string s_metric, s_kind = "auto";
  std::size_t s_m = 0;
  std::optional<std::size_t> s_n, s_n0;
  std::optional<double> s_beta, s_epsilon, s_delta;
  sensitivity->add_option("--metric", s_metric)
      ->required()
      ->check(CLI::IsMember(kMetrics));
  sensitivity->add_option("--m", s_m, "Query count")->required();
  sensitivity->add_option("--n", s_n, "Population size");
  sensitivity->add_option("--n0", s_n0, "Smaller group size");
  sensitivity->add_option("--beta", s_beta);
  sensitivity->add_option("--epsilon", s_epsilon);
  sensitivity->add_option("--delta", s_delta);
  sensitivity->add_option("--kind", s_kind)
      ->check(CLI::IsMember({"auto", "global", "smooth"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kExitUsage;
  }

  try {
    if (synth->parsed()) {
      const SyntheticData data = gen_synthetic(synth_n, synth_n0, seed);
      with_output(synth_out, out, [&](std::ostream& os) {
        write_scores_csv(os, data.dataset, data.base_row);
      });
    } else if (reveal->parsed()) {
      const TabularSource source = reveal_data.load();
      rcfg.n = source.dataset.n();
      rcfg.n0 = std::min(source.dataset.n0(), source.dataset.n1());
      rcfg.m = r_m;
      rcfg.attack = parse_strategy(r_attack);
      rcfg.solver = parse_sparse_method(r_solver);
      rcfg.metric = parse_metric(r_metric);
      rcfg.mechanism = parse_mechanism(r_mechanism);
      rcfg.epsilons = {parse_epsilon(r_epsilon)};
      rcfg.delta = r_delta;
      rcfg.sensing = r_sensing == "binary" ? Sensing::kBinary
                                           : Sensing::kPerturbed;
      rcfg.probe = r_probe;
      rcfg.seed = seed;
      rcfg.validate();
      const TrialOutcome outcome =
          run_trial(rcfg, rcfg.epsilons.front(), 0, &source);
      if (outcome.row.failed) {
        err << "warning: attack failed (" << outcome.row.error
            << "); leakage scores a random guess\n";
      }
      with_output(r_out, out, [&](std::ostream& os) {
        write_results(os, std::span(&outcome.row, 1),
                      parse_result_format(r_format));
      });
      if (!r_recovered.empty()) {
        with_output(r_recovered, out, [&](std::ostream& os) {
          os << "id,a_hat\n";
          for (std::size_t j = 0; j < outcome.a_hat.size(); ++j) {
            os << source.ids[j] << ',';
            switch (outcome.a_hat[j]) {
              case Recovered::kDisadvantaged:
                os << "0";
                break;
              case Recovered::kAdvantaged:
                os << "1";
                break;
              case Recovered::kUnknown:
                os << "unknown";
                break;
            }
            os << '\n';
          }
        });
      }
    } else if (conceal->parsed()) {
      nlohmann::json doc;
      try {
        doc = nlohmann::json::parse(read_file(c_in));
      } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::kParse, c_in + ": " + e.what());
      }
      QueryBatch batch;
      Population pop;
      try {
        batch.metric = parse_metric(doc.value("metric", std::string("SP")));
        batch.values = doc.at("values").get<std::vector<double>>();
        pop.n = c_n.value_or(doc.value("n", std::size_t{0}));
        pop.n0 = c_n0.value_or(doc.value("n0", std::size_t{0}));
        pop.n1 = c_n1.value_or(doc.value("n1", pop.n - std::min(pop.n, pop.n0)));
      } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::kParse, c_in + ": " + e.what());
      }
      const Mechanism mechanism = parse_mechanism(c_mechanism);
      const double epsilon = parse_epsilon(c_epsilon);
      const QueryBatch released =
          privatize(batch, mechanism, pop, epsilon, c_delta, seed);
      nlohmann::ordered_json o;
      o["metric"] = std::string(metric_name(released.metric));
      o["mechanism"] = std::string(mechanism_name(released.mechanism));
      if (std::isinf(epsilon)) {
        o["epsilon"] = "inf";
      } else {
        o["epsilon"] = epsilon;
      }
      if (released.delta) o["delta"] = *released.delta;
      o["scale"] = mechanism_scale(mechanism, batch.metric,
                                   batch.values.size(), pop, epsilon, c_delta);
      o["outside_theorem_range"] = released.outside_theorem_range;
      o["values"] = released.values;
      with_output(c_out, out,
                  [&](std::ostream& os) { os << o.dump(2) << '\n'; });
    } else if (experiment->parsed()) {
      ExperimentConfig cfg = parse_config(read_file(e_config));
      if (e_seed_opt->count() > 0) cfg.seed = seed;
      if (e_threads) cfg.threads = *e_threads;
      std::optional<TabularSource> source;
      if (!experiment_data.path.empty()) source = experiment_data.load();
      const std::vector<ExperimentRow> rows =
          run_experiment(cfg, source ? &*source : nullptr);
      const ResultFormat format = parse_result_format(e_format);
      if (e_out.empty()) {
        write_results(out, rows, format);
      } else {
        emit_results(rows, format, e_out);
      }
      std::size_t failed = 0;
      for (const auto& r : rows) failed += r.failed ? 1 : 0;
      if (failed > 0) {
        err << "warning: " << failed << " of " << rows.size()
            << " trials failed and were scored as random guesses\n";
      }
    } else if (sensitivity->parsed()) {
      const Metric metric = parse_metric(s_metric);
      const bool smooth =
          s_kind == "smooth" ||
          (s_kind == "auto" && s_n0 && (s_beta || s_epsilon));
      double value = 0.0;
      if (!smooth) {
        if (!s_n) {
          throw Error(ErrorCode::kInvalidArgument,
                      "global sensitivity needs --n");
        }
        value = global_sensitivity(metric, s_m, *s_n).value;
      } else {
        if (!s_n0) {
          throw Error(ErrorCode::kInvalidArgument,
                      "smooth sensitivity needs --n0");
        }
        double beta = 0.0;
        if (s_beta) {
          beta = *s_beta;
        } else if (s_epsilon) {
          beta = s_delta ? laplace_smooth_beta(*s_epsilon, *s_delta, s_m)
                         : cauchy_beta(*s_epsilon, s_m);
        } else {
          throw Error(ErrorCode::kInvalidArgument,
                      "smooth sensitivity needs --beta or --epsilon");
        }
        if (is_absolute(metric)) {
          value = smooth_sensitivity_abs_sp(s_m, *s_n0, beta).value;
        } else {
          if (!s_n || *s_n0 > *s_n) {
            throw Error(ErrorCode::kInvalidArgument,
                        "smooth SP sensitivity needs --n >= --n0");
          }
          const std::size_t other = *s_n - *s_n0;
          value = smooth_sensitivity_sp(s_m, *s_n, std::min(*s_n0, other),
                                        std::max(*s_n0, other), beta)
                      .value;
        }
      }
      out << value << '\n';
    }
  } catch (const Error& e) {
    err << "error [" << error_code_name(e.code()) << "]: " << e.what() << '\n';
    return kExitRuntime;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitOk;
}

}  // namespace fairquery
