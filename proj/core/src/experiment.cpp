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

#include "fedbench/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "fedbench/data.hpp"
#include "fedbench/error.hpp"
#include "fedbench/rng.hpp"

namespace fedbench {
namespace {

std::string iso8601_utc_now() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

// Bit-exact digest of the parameter vector.
std::string digest_params(const ParamVector& params) {
  std::string bytes(params.values.size() * sizeof(double), '\0');
  std::memcpy(bytes.data(), params.values.data(), bytes.size());
  return sha256_hex(bytes);
}

nlohmann::json round_history_json(const std::vector<RoundRecord>& history,
                                  bool include_wall) {
  nlohmann::json arr = nlohmann::json::array();
  for (const RoundRecord& r : history) {
    nlohmann::json entry = {{"round", r.round},
                            {"val_accuracy", r.val_accuracy},
                            {"val_loss", r.val_loss},
                            {"mean_update_norm", r.mean_update_norm}};
    if (include_wall) entry["wall_seconds"] = r.wall_seconds;
    arr.push_back(entry);
  }
  return arr;
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

}  // namespace

nlohmann::json RunResult::to_json() const {
  nlohmann::json j;
  j["experiment_id"] = experiment_id;
  j["created_at"] = created_at;
  j["configuration"] = configuration;
  nlohmann::json results = {
      {"accuracy", metrics.accuracy},
      {"f1", metrics.f1},
      {"mcc", metrics.mcc},
      {"precision", metrics.precision},
      {"recall", metrics.recall},
      {"auc", metrics.auc},
      {"training_time", telemetry.training_seconds},
      {"energy_kwh", telemetry.energy_kwh},
      {"co2_kg", telemetry.co2_kg},
      {"status", to_string(status)},
      {"status_reason", status_reason},
      {"round_history", round_history_json(round_history, true)},
      {"split_stratified", split_stratified},
  };
  if (epsilon_spent) results["epsilon_spent"] = *epsilon_spent;
  j["results"] = std::move(results);
  j["resources"] = {{"wall_seconds", telemetry.wall_seconds},
                    {"peak_rss_bytes", telemetry.peak_rss},
                    {"phase_seconds", telemetry.phase_seconds}};
  j["reproducibility"] = {{"seed", seed},
                          {"config_hash", config_hash},
                          {"params_digest", params_digest},
                          {"result_hash", result_hash}};
  if (const char* commit = std::getenv("FEDBENCH_GIT_COMMIT")) {
    j["reproducibility"]["git_commit"] = commit;
  }
  return j;
}

RunResult run_experiment(const ExperimentConfig& config,
                         std::optional<std::uint64_t> seed_override,
                         bool write_output) {
  ExperimentConfig cfg = config;
  if (seed_override) cfg.experiment.seed = *seed_override;
  const std::uint64_t seed = cfg.experiment.seed;

  RunResult result;
  result.configuration = cfg.to_json();
  result.config_hash = cfg.config_hash();
  result.experiment_id =
      cfg.experiment.name + "-" + result.config_hash.substr(0, 8);
  result.created_at = iso8601_utc_now();
  result.seed = seed;

  TelemetryCollector telemetry;
  const ModelSpec spec = cfg.model_spec();
  spec.validate();

  ParamVector final_params;
  {
    auto total_span = telemetry.span("total");

    Dataset data;
    TrainValSplit split;
    {
      auto span = telemetry.span("data");
      if (cfg.dataset.source == "synthetic") {
        DeterministicStream stream = derive_stream(seed, "data/synthetic");
        data = generate_blobs(cfg.model.num_classes, cfg.model.input_dim,
                              cfg.dataset.num_samples, cfg.dataset.separation,
                              stream);
      } else {
        data = load_csv(cfg.dataset.path);
        if (data.dim != cfg.model.input_dim) {
          throw ValidationError(
              "dataset: csv has " + std::to_string(data.dim) +
              " features but model.input_dim is " +
              std::to_string(cfg.model.input_dim));
        }
        if (data.num_classes > cfg.model.num_classes) {
          throw ValidationError(
              "dataset: csv labels exceed model.num_classes");
        }
        data.num_classes = cfg.model.num_classes;
      }
      DeterministicStream split_stream = derive_stream(seed, "data/split");
      split = split_train_val(data, cfg.dataset.train_fraction, split_stream);
      result.split_stratified = split.stratified;
    }

    DeterministicStream init_stream = derive_stream(seed, "init/params");
    ParamVector initial_params = init_params(spec, init_stream);

    {
      auto span = telemetry.span("train");
      if (cfg.federated.enabled) {
        FlConfig fl;
        fl.num_clients = cfg.federated.num_clients;
        fl.num_rounds = cfg.federated.num_rounds;
        fl.local_epochs = cfg.federated.local_epochs;
        fl.client_lr = cfg.federated.client_lr;
        fl.batch_size = cfg.dataset.batch_size;
        fl.dirichlet_alpha = cfg.federated.alpha;
        fl.failure_monitor = cfg.monitoring.failure_monitor;

        SmpcSettings smpc;
        smpc.enabled = cfg.secure_mpc.enabled;
        smpc.threshold = static_cast<std::uint32_t>(cfg.secure_mpc.threshold);
        smpc.quantization_bits = cfg.secure_mpc.quantization_bits;
        smpc.clip_range = cfg.secure_mpc.clip_range;
        smpc.drop_clients = cfg.secure_mpc.drop_clients;

        FederatedResult fed = run_federated(
            spec, data, split.train, split.val, fl, cfg.dp_config(), smpc,
            seed, std::move(initial_params), &telemetry);
        final_params = std::move(fed.params);
        result.round_history = std::move(fed.history);
        result.status = fed.status;
        result.status_reason = fed.status_reason;
        result.epsilon_spent = fed.epsilon_spent;
      } else {
        TrainHyper hyper;
        hyper.epochs = cfg.training.epochs;
        hyper.batch_size = cfg.dataset.batch_size;
        hyper.learning_rate = cfg.training.learning_rate;
        hyper.patience = cfg.training.early_stopping_patience;
        TrainResult trained =
            train_centralized(spec, data, split.train, split.val, hyper, seed,
                              std::move(initial_params));
        final_params = std::move(trained.params);
        for (const EpochRecord& e : trained.history) {
          result.round_history.push_back(
              {e.epoch, e.val_accuracy, e.val_loss, 0.0, 0.0});
        }
        result.status = RunStatus::Completed;
        result.status_reason =
            trained.early_stopped ? "early stopping" : "max epochs";
      }
    }

    {
      auto span = telemetry.span("evaluate");
      std::vector<int> true_labels;
      std::vector<int> predicted;
      std::vector<double> scores;
      for (int idx : split.val) {
        true_labels.push_back(data.labels[idx]);
        const auto proba = predict_proba(final_params, spec, data.row(idx));
        predicted.push_back(static_cast<int>(
            std::max_element(proba.begin(), proba.end()) - proba.begin()));
        scores.insert(scores.end(), proba.begin(), proba.end());
      }
      result.metrics = classification_metrics(true_labels, predicted, scores,
                                              cfg.model.num_classes);
    }
  }

  result.telemetry.phase_seconds = telemetry.totals();
  result.telemetry.wall_seconds = telemetry.total_seconds("total");
  result.telemetry.training_seconds = telemetry.total_seconds("train");
  result.telemetry.peak_rss = peak_rss_bytes();
  if (cfg.monitoring.track_energy) {
    PowerProfile profile{cfg.monitoring.power_device,
                         cfg.monitoring.power_watts,
                         cfg.monitoring.power_utilization};
    result.telemetry.energy_kwh =
        estimate_energy_kwh(result.telemetry.wall_seconds, profile);
    result.telemetry.co2_kg = estimate_co2_kg(
        result.telemetry.energy_kwh, cfg.monitoring.carbon_intensity);
  }

  result.params_digest = digest_params(final_params);
  nlohmann::json hashed = {
      {"config_hash", result.config_hash},
      {"seed", result.seed},
      {"status", to_string(result.status)},
      {"status_reason", result.status_reason},
      {"metrics",
       {{"accuracy", result.metrics.accuracy},
        {"f1", result.metrics.f1},
        {"mcc", result.metrics.mcc},
        {"precision", result.metrics.precision},
        {"recall", result.metrics.recall},
        {"auc", result.metrics.auc}}},
      {"round_history", round_history_json(result.round_history, false)},
      {"params_digest", result.params_digest},
      {"split_stratified", result.split_stratified},
  };
  if (result.epsilon_spent) hashed["epsilon_spent"] = *result.epsilon_spent;
  result.result_hash = sha256_hex(hashed.dump());

  if (write_output) {
    std::filesystem::create_directories(cfg.experiment.output_dir);
    const std::string path = cfg.experiment.output_dir + "/" +
                             result.experiment_id + ".json";
    std::ofstream out(path);
    if (!out) throw Error("run: cannot write " + path);
    out << result.to_json().dump(2) << "\n";
  }
  return result;
}

LoadedResult load_result_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("results: cannot open " + path);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(path + ": invalid JSON: " + e.what());
  }
  try {
    LoadedResult r;
    r.experiment_id = j.at("experiment_id").get<std::string>();
    r.name = j.at("configuration").at("experiment").at("name").get<std::string>();
    r.seed = j.at("reproducibility").at("seed").get<std::uint64_t>();
    const auto& res = j.at("results");
    r.status = res.at("status").get<std::string>();
    r.accuracy = res.at("accuracy").get<double>();
    r.f1 = res.at("f1").get<double>();
    r.mcc = res.at("mcc").get<double>();
    r.precision = res.at("precision").get<double>();
    r.recall = res.at("recall").get<double>();
    r.auc = res.at("auc").get<double>();
    r.training_time = res.at("training_time").get<double>();
    r.energy_kwh = res.at("energy_kwh").get<double>();
    r.co2_kg = res.at("co2_kg").get<double>();
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(path + ": not a result file: " + e.what());
  }
}

namespace {

const LoadedResult* find_baseline(const std::vector<LoadedResult>& runs,
                                  const std::string& baseline) {
  for (const LoadedResult& r : runs) {
    if (r.experiment_id == baseline) return &r;
  }
  for (const LoadedResult& r : runs) {
    if (r.name == baseline) return &r;
  }
  return nullptr;
}

}  // namespace

std::string compare_runs(const std::vector<std::string>& result_paths,
                         const std::string& baseline) {
  if (result_paths.size() < 2) {
    throw ValidationError("compare: need at least two result files");
  }
  std::vector<LoadedResult> runs;
  for (const std::string& path : result_paths) {
    runs.push_back(load_result_file(path));
  }
  const LoadedResult* base = find_baseline(runs, baseline);
  if (!base) {
    throw ValidationError("compare: baseline \"" + baseline +
                          "\" not among the result files");
  }
  const std::string baseline_name = base->name;

  // Group runs by configuration name; multi-seed groups get statistics.
  std::map<std::string, std::vector<const LoadedResult*>> groups;
  for (const LoadedResult& r : runs) groups[r.name].push_back(&r);
  for (auto& [name, members] : groups) {
    std::sort(members.begin(), members.end(),
              [](const auto* a, const auto* b) { return a->seed < b->seed; });
  }

  double baseline_time = 0.0;
  for (const auto* r : groups[baseline_name]) baseline_time += r->training_time;
  baseline_time /= groups[baseline_name].size();
  if (!(baseline_time > 0)) {
    throw DomainError("compare: baseline training time must be > 0");
  }

  // Paired-by-seed accuracy tests against the baseline group.
  struct GroupStats {
    bool present = false;
    StatTestResult test;
  };
  std::map<std::string, GroupStats> stats;
  std::vector<std::string> tested_names;
  std::vector<double> raw_p;
  for (const auto& [name, members] : groups) {
    if (name == baseline_name) continue;
    std::vector<double> a;
    std::vector<double> b;
    for (const auto* r : members) {
      for (const auto* s : groups[baseline_name]) {
        if (s->seed == r->seed) {
          a.push_back(r->accuracy);
          b.push_back(s->accuracy);
          break;
        }
      }
    }
    if (a.size() >= 2) {
      GroupStats gs;
      gs.present = true;
      gs.test = paired_t_test(a, b);
      stats[name] = gs;
      tested_names.push_back(name);
      raw_p.push_back(gs.test.p_value);
    }
  }
  if (!raw_p.empty()) {
    const int comparisons = static_cast<int>(groups.size()) - 1;
    const auto adjusted = bonferroni(raw_p, std::max<int>(comparisons, 1));
    for (std::size_t i = 0; i < tested_names.size(); ++i) {
      stats[tested_names[i]].test.adjusted_p = adjusted[i];
    }
  }

  std::ostringstream csv;
  csv << "name,experiment_id,seed,status,accuracy,f1,mcc,precision,recall,"
         "auc,training_time_s,energy_kwh,co2_kg,overhead_factor,p_value,"
         "p_adjusted,cohens_d\n";
  char overhead_buf[32];
  for (const LoadedResult& r : runs) {
    std::snprintf(overhead_buf, sizeof(overhead_buf), "%.1f",
                  overhead_factor(r.training_time, baseline_time));
    csv << r.name << "," << r.experiment_id << "," << r.seed << "," << r.status
        << "," << format_double(r.accuracy) << "," << format_double(r.f1)
        << "," << format_double(r.mcc) << "," << format_double(r.precision)
        << "," << format_double(r.recall) << "," << format_double(r.auc) << ","
        << format_double(r.training_time) << ","
        << format_double(r.energy_kwh) << "," << format_double(r.co2_kg)
        << "," << overhead_buf;
    auto it = stats.find(r.name);
    if (it != stats.end() && it->second.present) {
      csv << "," << format_double(it->second.test.p_value) << ","
          << format_double(it->second.test.adjusted_p) << ","
          << format_double(it->second.test.effect_size);
    } else {
      csv << ",,,";
    }
    csv << "\n";
  }
  return csv.str();
}

std::string plot_data_csv(const std::vector<std::string>& result_paths,
                          const std::string& baseline) {
  if (result_paths.empty()) {
    throw ValidationError("plot-data: need at least one result file");
  }
  std::vector<LoadedResult> runs;
  for (const std::string& path : result_paths) {
    runs.push_back(load_result_file(path));
  }
  const LoadedResult* base =
      baseline.empty() ? &runs.front() : find_baseline(runs, baseline);
  if (!base) {
    throw ValidationError("plot-data: baseline \"" + baseline +
                          "\" not among the result files");
  }
  if (!(base->training_time > 0)) {
    throw DomainError("plot-data: baseline training time must be > 0");
  }
  std::ostringstream csv;
  csv << "config,accuracy,overhead_factor,mcc,energy_kwh\n";
  for (const LoadedResult& r : runs) {
    csv << r.name << "," << format_double(r.accuracy) << ","
        << format_double(overhead_factor(r.training_time, base->training_time))
        << "," << format_double(r.mcc) << "," << format_double(r.energy_kwh)
        << "\n";
  }
  return csv.str();
}

}  // namespace fedbench
