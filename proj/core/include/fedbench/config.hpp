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

#ifndef FEDBENCH_CONFIG_HPP_
#define FEDBENCH_CONFIG_HPP_

#include <nlohmann/json.hpp>

#include <cstdint>
#include <optional>
#include <set>
#include <string>

#include "fedbench/dp.hpp"
#include "fedbench/model.hpp"

namespace fedbench {

// Validated, fully-defaulted in-memory form of a YAML experiment file.
//
// The schema is closed: unknown keys anywhere are validation errors, with
// the offending path in the message. Defaults are materialized at parse
// time so that emitting and re-parsing a config is the identity.
struct ExperimentConfig {
  struct Experiment {
    std::string name;
    std::string description;
    std::uint64_t seed = 42;
    std::string output_dir = "./results";
    friend bool operator==(const Experiment&, const Experiment&) = default;
  };
  struct Model {
    ModelKind kind = ModelKind::Logistic;
    int input_dim = 0;
    int hidden_dim = 0;  // mlp1 only
    int num_classes = 0;
    friend bool operator==(const Model&, const Model&) = default;
  };
  struct DatasetCfg {
    std::string source = "synthetic";  // synthetic | csv
    std::string path;                  // csv only
    int num_samples = 3000;            // synthetic only
    double separation = 6.0;           // synthetic only
    int batch_size = 32;
    double train_fraction = 0.92;
    friend bool operator==(const DatasetCfg&, const DatasetCfg&) = default;
  };
  struct Training {
    int epochs = 50;
    double learning_rate = 1e-3;
    std::string optimizer = "adam";
    int early_stopping_patience = 7;
    friend bool operator==(const Training&, const Training&) = default;
  };
  struct Federated {
    bool enabled = false;
    int num_clients = 3;
    int num_rounds = 5;
    int local_epochs = 5;
    double client_lr = 1e-3;  // defaults to training.learning_rate
    std::string data_partition = "dirichlet";
    double alpha = 0.1;
    friend bool operator==(const Federated&, const Federated&) = default;
  };
  struct SecureMpc {
    bool enabled = false;
    int threshold = 2;
    int total_shares = 3;  // defaults to federated.num_clients
    int quantization_bits = 16;
    double clip_range = 8.0;
    int dropout_resilience = 1;  // total_shares - threshold
    std::set<std::uint32_t> drop_clients;  // test hook, 1-based
    friend bool operator==(const SecureMpc&, const SecureMpc&) = default;
  };
  struct DiffPrivacy {
    bool enabled = false;
    std::string strategy;  // cdp_sf | cdp_sa | ldp_mod | ldp_pe
    double epsilon = 1.0;
    double delta = 1e-5;
    double noise_multiplier = 1.0;
    double max_grad_norm = 1.0;
    int lot_size = 32;
    std::string calibration = "accountant";  // accountant | paper_formula
    friend bool operator==(const DiffPrivacy&, const DiffPrivacy&) = default;
  };
  struct Monitoring {
    bool track_energy = true;
    std::string power_device = "default-cpu";
    double power_watts = 70.0;
    double power_utilization = 1.0;
    double carbon_intensity = 0.475;  // kg CO2 per kWh, echoed into results
    bool failure_monitor = true;
    friend bool operator==(const Monitoring&, const Monitoring&) = default;
  };

  Experiment experiment;
  Model model;
  DatasetCfg dataset;
  Training training;
  Federated federated;
  SecureMpc secure_mpc;
  DiffPrivacy differential_privacy;
  Monitoring monitoring;

  friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) =
      default;

  ModelSpec model_spec() const;
  std::optional<DpConfig> dp_config() const;

  // Canonical JSON echo; its hash identifies the configuration.
  nlohmann::json to_json() const;
  std::string config_hash() const;

  // YAML text with every field explicit; parse_config(emit_yaml()) == *this.
  std::string emit_yaml() const;
};

ExperimentConfig parse_config(const std::string& yaml_text);
ExperimentConfig load_config_file(const std::string& path);

DpStrategy parse_dp_strategy(const std::string& name);
std::string to_string(DpStrategy strategy);
std::string to_string(ModelKind kind);

}  // namespace fedbench

#endif  // FEDBENCH_CONFIG_HPP_
