// Copyright 2026 The FedBench Authors
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

#ifndef FEDBENCH_EXPERIMENT_HPP_
#define FEDBENCH_EXPERIMENT_HPP_

#include <nlohmann/json.hpp>

#include <optional>
#include <string>
#include <vector>

#include "fedbench/config.hpp"
#include "fedbench/federation.hpp"
#include "fedbench/metrics.hpp"
#include "fedbench/telemetry.hpp"

namespace fedbench {

// Structured output of one experiment run.
//
// experiment_id is "<name>-<config_hash prefix>" with no timestamp, so the
// id is stable across reruns; wall-clock context lives in the unhashed
// created_at field. result_hash covers every deterministic field (metrics,
// status, round history, parameter digest) and excludes all timing- and
// energy-derived values.
struct RunResult {
  std::string experiment_id;
  std::string created_at;  // ISO 8601 UTC, never hashed
  nlohmann::json configuration;

  MetricsReport metrics;
  RunStatus status = RunStatus::Completed;
  std::string status_reason;
  std::vector<RoundRecord> round_history;
  std::optional<double> epsilon_spent;
  bool split_stratified = true;

  RunTelemetry telemetry;

  std::uint64_t seed = 0;
  std::string config_hash;
  std::string params_digest;
  std::string result_hash;

  nlohmann::json to_json() const;
};

// Executes the configured pipeline: data preparation, centralized or
// federated training, evaluation, telemetry, and JSON emission to
// "<output_dir>/<experiment_id>.json". Returns the result; `seed_override`
// replaces the config seed when set.
RunResult run_experiment(const ExperimentConfig& config,
                         std::optional<std::uint64_t> seed_override =
                             std::nullopt,
                         bool write_output = true);

// Minimal view of a result file used by compare / plot-data.
struct LoadedResult {
  std::string experiment_id;
  std::string name;
  std::uint64_t seed = 0;
  std::string status;
  double accuracy = 0.0;
  double f1 = 0.0;
  double mcc = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  double auc = 0.0;
  double training_time = 0.0;
  double energy_kwh = 0.0;
  double co2_kg = 0.0;
};

LoadedResult load_result_file(const std::string& path);

// Comparison table across result files. One CSV row per run with its
// overhead factor against the baseline configuration's mean training time
// (one decimal, as reported in summaries); configurations with at least
// two seeds paired with the baseline also get a paired t-test p-value, a
// Bonferroni-adjusted p over the non-baseline configurations, and Cohen's
// d on accuracy. `baseline` matches an experiment_id or a configuration
// name and must be among the inputs.
std::string compare_runs(const std::vector<std::string>& result_paths,
                         const std::string& baseline);

// Tidy CSV (config, accuracy, overhead_factor, mcc, energy_kwh) for
// external plotting. Baseline defaults to the first file.
std::string plot_data_csv(const std::vector<std::string>& result_paths,
                          const std::string& baseline = "");

}  // namespace fedbench

#endif  // FEDBENCH_EXPERIMENT_HPP_
