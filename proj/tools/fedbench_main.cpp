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

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "fedbench/data.hpp"
#include "fedbench/error.hpp"
#include "fedbench/experiment.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 2;
constexpr int kExitConvergenceFailure = 3;
constexpr int kExitProtocolAbort = 4;

const std::vector<std::uint64_t> kSeedPreset = {42, 123, 456};

struct RunOptions {
  std::string config_path;
  std::string output_dir;
  std::optional<std::uint64_t> seed;
  bool use_seed_preset = false;
  bool quiet = false;
};

int do_run(const RunOptions& opt) {
  fedbench::ExperimentConfig config =
      fedbench::load_config_file(opt.config_path);
  if (!opt.output_dir.empty()) config.experiment.output_dir = opt.output_dir;

  std::vector<std::uint64_t> seeds;
  if (opt.use_seed_preset) {
    seeds = kSeedPreset;
  } else {
    seeds = {opt.seed.value_or(config.experiment.seed)};
  }

  int exit_code = kExitOk;
  for (std::uint64_t seed : seeds) {
    fedbench::RunResult result = fedbench::run_experiment(config, seed);
    const std::string path = config.experiment.output_dir + "/" +
                             result.experiment_id + ".json";
    if (opt.quiet) {
      std::cout << path << "\n";
    } else {
      std::cout << "experiment_id: " << result.experiment_id << "\n"
                << "seed: " << seed << "\n"
                << "status: " << fedbench::to_string(result.status) << "\n"
                << "accuracy: " << result.metrics.accuracy << "\n"
                << "mcc: " << result.metrics.mcc << "\n"
                << "training_time_s: " << result.telemetry.training_seconds
                << "\n"
                << "result_hash: " << result.result_hash << "\n"
                << "result: " << path << "\n";
    }
    if (result.status == fedbench::RunStatus::FailedConvergence) {
      exit_code = kExitConvergenceFailure;
    } else if (result.status == fedbench::RunStatus::Aborted) {
      exit_code = kExitProtocolAbort;
    }
  }
  return exit_code;
}

int do_validate(const std::string& config_path, bool quiet) {
  fedbench::ExperimentConfig config =
      fedbench::load_config_file(config_path);
  if (!quiet) {
    std::cout << "valid\n"
              << "config_hash: " << config.config_hash() << "\n";
  }
  return kExitOk;
}

int do_partition_report(const std::string& config_path) {
  fedbench::ExperimentConfig config =
      fedbench::load_config_file(config_path);
  if (config.dataset.source != "synthetic" && config.dataset.path.empty()) {
    throw fedbench::ValidationError("partition-report: dataset not specified");
  }
  fedbench::Dataset data;
  if (config.dataset.source == "synthetic") {
    auto stream = fedbench::derive_stream(config.experiment.seed,
                                          "data/synthetic");
    data = fedbench::generate_blobs(config.model.num_classes,
                                    config.model.input_dim,
                                    config.dataset.num_samples,
                                    config.dataset.separation, stream);
  } else {
    data = fedbench::load_csv(config.dataset.path);
  }
  auto split_stream = fedbench::derive_stream(config.experiment.seed,
                                              "data/split");
  const auto split = fedbench::split_train_val(
      data, config.dataset.train_fraction, split_stream);
  auto part_stream = fedbench::derive_stream(config.experiment.seed,
                                             "data/partition");
  const auto partition = fedbench::dirichlet_partition(
      data.labels, split.train, config.federated.num_clients,
      config.federated.alpha, part_stream);
  const auto hist = fedbench::class_histograms(data, partition);

  std::printf("client  total");
  for (int k = 0; k < data.num_classes; ++k) std::printf("  class%-2d", k);
  std::printf("\n");
  for (std::size_t c = 0; c < hist.size(); ++c) {
    int total = 0;
    for (int count : hist[c]) total += count;
    std::printf("%6zu  %5d", c, total);
    for (int count : hist[c]) std::printf("  %7d", count);
    std::printf("\n");
  }
  return kExitOk;
}

void emit_csv(const std::string& csv, const std::string& output_path) {
  if (output_path.empty()) {
    std::cout << csv;
    return;
  }
  std::ofstream out(output_path);
  if (!out) {
    throw fedbench::Error("cannot write " + output_path);
  }
  out << csv;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Deterministic benchmark simulator for privacy-preserving "
               "federated learning"};
  app.require_subcommand(1);
  bool quiet = false;
  app.add_flag("--quiet", quiet, "Print only result file paths");

  auto* validate_cmd =
      app.add_subcommand("validate", "Validate an experiment config");
  std::string validate_path;
  validate_cmd->add_option("config", validate_path, "YAML config file")
      ->required();

  auto* run_cmd = app.add_subcommand("run", "Run an experiment");
  RunOptions run_opt;
  run_cmd->add_option("config", run_opt.config_path, "YAML config file")
      ->required();
  run_cmd->add_option("--output", run_opt.output_dir,
                      "Override the config's output directory");
  std::uint64_t seed_value = 0;
  auto* seed_opt = run_cmd->add_option("--seed", seed_value,
                                       "Override the config's seed");
  run_cmd->add_flag("--seeds", run_opt.use_seed_preset,
                    "Run the 42/123/456 seed preset (one result per seed)");

  auto* compare_cmd =
      app.add_subcommand("compare", "Compare result files against a baseline");
  std::vector<std::string> compare_paths;
  std::string baseline;
  std::string csv_output;
  compare_cmd->add_option("results", compare_paths, "Result JSON files")
      ->required()
      ->expected(-2);
  compare_cmd->add_option("--baseline", baseline,
                          "Baseline experiment id or name")
      ->required();
  compare_cmd->add_option("--output", csv_output, "Write CSV here (default stdout)");

  auto* report_cmd = app.add_subcommand(
      "partition-report", "Per-client class histogram for a config");
  std::string report_path;
  report_cmd->add_option("config", report_path, "YAML config file")->required();

  auto* plot_cmd = app.add_subcommand(
      "plot-data", "Tidy CSV of accuracy / overhead / mcc / energy");
  std::vector<std::string> plot_paths;
  std::string plot_baseline;
  std::string plot_output;
  plot_cmd->add_option("results", plot_paths, "Result JSON files")
      ->required()
      ->expected(-1);
  plot_cmd->add_option("--baseline", plot_baseline,
                       "Baseline experiment id or name (default: first file)");
  plot_cmd->add_option("--output", plot_output, "Write CSV here (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return kExitValidation;
  }

  try {
    if (*validate_cmd) return do_validate(validate_path, quiet);
    if (*run_cmd) {
      if (*seed_opt) run_opt.seed = seed_value;
      run_opt.quiet = quiet;
      return do_run(run_opt);
    }
    if (*compare_cmd) {
      emit_csv(fedbench::compare_runs(compare_paths, baseline), csv_output);
      return kExitOk;
    }
    if (*report_cmd) return do_partition_report(report_path);
    if (*plot_cmd) {
      emit_csv(fedbench::plot_data_csv(plot_paths, plot_baseline), plot_output);
      return kExitOk;
    }
  } catch (const fedbench::SessionAbortError& e) {
    std::cerr << "protocol abort: " << e.what() << "\n";
    return kExitProtocolAbort;
  } catch (const fedbench::ProtocolError& e) {
    std::cerr << "protocol error: " << e.what() << "\n";
    return kExitProtocolAbort;
  } catch (const fedbench::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const fedbench::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return kExitValidation;
}
