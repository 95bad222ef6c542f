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

#include "fedbench/config.hpp"

#include <yaml-cpp/yaml.h>

#include <fstream>
#include <sstream>

#include "fedbench/error.hpp"
#include "fedbench/rng.hpp"

namespace fedbench {
namespace {

// Typed accessors over a YAML mapping that track which keys were consumed,
// so anything left over can be reported as an unknown key with its path.
class Block {
 public:
  Block(const YAML::Node& node, std::string path)
      : node_(node), path_(std::move(path)) {
    if (node_ && !node_.IsMap()) {
      throw ValidationError(path_ + ": expected a mapping");
    }
  }

  bool present() const { return static_cast<bool>(node_); }

  bool has(const std::string& key) const {
    return present() && static_cast<bool>(node_[key]);
  }

  template <typename T>
  T require(const std::string& key) {
    if (!has(key)) {
      throw ValidationError(path_ + "." + key + ": required key is missing");
    }
    return get<T>(key);
  }

  template <typename T>
  T get_or(const std::string& key, T fallback) {
    if (!has(key)) return fallback;
    return get<T>(key);
  }

  template <typename T>
  T get(const std::string& key) {
    consumed_.insert(key);
    try {
      return node_[key].as<T>();
    } catch (const YAML::Exception&) {
      throw ValidationError(path_ + "." + key + ": wrong type");
    }
  }

  void forbid(const std::string& key, const std::string& why) {
    if (has(key)) {
      throw ValidationError(path_ + "." + key + ": " + why);
    }
  }

  // Marks a key consumed without reading it (inert keys of disabled blocks).
  void ignore(const std::string& key) { consumed_.insert(key); }

  Block child(const std::string& key) {
    consumed_.insert(key);
    return Block(node_ ? node_[key] : YAML::Node(YAML::NodeType::Undefined),
                 path_ + "." + key);
  }

  // Call after all reads: any remaining key is unknown.
  void finish() const {
    if (!present()) return;
    for (const auto& kv : node_) {
      std::string key;
      try {
        key = kv.first.as<std::string>();
      } catch (const YAML::Exception&) {
        throw ValidationError(path_ + ": non-scalar mapping key");
      }
      if (!consumed_.contains(key)) {
        throw ValidationError(path_ + "." + key + ": unknown key");
      }
    }
  }

 private:
  YAML::Node node_;
  std::string path_;
  std::set<std::string> consumed_;
};

void check_positive(double v, const std::string& path) {
  if (!(v > 0)) throw ValidationError(path + ": must be > 0");
}

void check_min(int v, int lo, const std::string& path) {
  if (v < lo) {
    throw ValidationError(path + ": must be >= " + std::to_string(lo));
  }
}

}  // namespace

DpStrategy parse_dp_strategy(const std::string& name) {
  if (name == "cdp_sf") return DpStrategy::CdpSf;
  if (name == "cdp_sa") return DpStrategy::CdpSa;
  if (name == "ldp_mod") return DpStrategy::LdpMod;
  if (name == "ldp_pe") return DpStrategy::LdpPe;
  throw ValidationError("differential_privacy.strategy: unknown strategy \"" +
                        name + "\"");
}

std::string to_string(DpStrategy strategy) {
  switch (strategy) {
    case DpStrategy::CdpSf:
      return "cdp_sf";
    case DpStrategy::CdpSa:
      return "cdp_sa";
    case DpStrategy::LdpMod:
      return "ldp_mod";
    case DpStrategy::LdpPe:
      return "ldp_pe";
  }
  return "unknown";
}

std::string to_string(ModelKind kind) {
  return kind == ModelKind::Logistic ? "logistic" : "mlp1";
}

ExperimentConfig parse_config(const std::string& yaml_text) {
  YAML::Node root;
  try {
    root = YAML::Load(yaml_text);
  } catch (const YAML::Exception& e) {
    throw ParseError(std::string("config: invalid YAML: ") + e.what());
  }
  if (!root.IsMap()) throw ValidationError("config: top level must be a mapping");

  ExperimentConfig cfg;
  Block top(root, "config");

  {
    Block b = top.child("experiment");
    if (!b.present()) {
      throw ValidationError("config.experiment: required block is missing");
    }
    cfg.experiment.name = b.require<std::string>("name");
    if (cfg.experiment.name.empty()) {
      throw ValidationError("experiment.name: must be nonempty");
    }
    cfg.experiment.description = b.get_or<std::string>("description", "");
    cfg.experiment.seed = b.get_or<std::uint64_t>("seed", 42);
    cfg.experiment.output_dir =
        b.get_or<std::string>("output_dir", "./results");
    b.finish();
  }
  {
    Block b = top.child("model");
    if (!b.present()) {
      throw ValidationError("config.model: required block is missing");
    }
    const std::string kind = b.require<std::string>("kind");
    if (kind == "logistic") {
      cfg.model.kind = ModelKind::Logistic;
      b.forbid("hidden_dim", "only valid for kind mlp1");
    } else if (kind == "mlp1") {
      cfg.model.kind = ModelKind::Mlp1;
      cfg.model.hidden_dim = b.require<int>("hidden_dim");
      check_min(cfg.model.hidden_dim, 1, "model.hidden_dim");
    } else {
      throw ValidationError("model.kind: must be \"logistic\" or \"mlp1\"");
    }
    cfg.model.input_dim = b.require<int>("input_dim");
    cfg.model.num_classes = b.require<int>("num_classes");
    check_min(cfg.model.input_dim, 1, "model.input_dim");
    check_min(cfg.model.num_classes, 2, "model.num_classes");
    b.finish();
  }
  {
    Block b = top.child("dataset");
    if (!b.present()) {
      throw ValidationError("config.dataset: required block is missing");
    }
    cfg.dataset.source = b.require<std::string>("source");
    if (cfg.dataset.source == "csv") {
      cfg.dataset.path = b.require<std::string>("path");
      b.forbid("num_samples", "only valid for synthetic datasets");
      b.forbid("separation", "only valid for synthetic datasets");
      cfg.dataset.num_samples = 0;
      cfg.dataset.separation = 0.0;
    } else if (cfg.dataset.source == "synthetic") {
      b.forbid("path", "only valid for csv datasets");
      cfg.dataset.num_samples = b.get_or<int>("num_samples", 3000);
      cfg.dataset.separation = b.get_or<double>("separation", 6.0);
      check_min(cfg.dataset.num_samples, cfg.model.num_classes,
                "dataset.num_samples");
      if (cfg.dataset.separation < 0) {
        throw ValidationError("dataset.separation: must be >= 0");
      }
    } else {
      throw ValidationError(
          "dataset.source: must be \"synthetic\" or \"csv\"");
    }
    cfg.dataset.batch_size = b.get_or<int>("batch_size", 32);
    cfg.dataset.train_fraction = b.get_or<double>("train_fraction", 0.92);
    check_min(cfg.dataset.batch_size, 1, "dataset.batch_size");
    if (!(cfg.dataset.train_fraction > 0.0) ||
        !(cfg.dataset.train_fraction < 1.0)) {
      throw ValidationError("dataset.train_fraction: must be in (0, 1)");
    }
    b.finish();
  }
  {
    Block b = top.child("training");
    cfg.training.epochs = b.get_or<int>("epochs", 50);
    cfg.training.learning_rate = b.get_or<double>("learning_rate", 1e-3);
    cfg.training.optimizer = b.get_or<std::string>("optimizer", "adam");
    cfg.training.early_stopping_patience =
        b.get_or<int>("early_stopping_patience", 7);
    check_min(cfg.training.epochs, 1, "training.epochs");
    check_positive(cfg.training.learning_rate, "training.learning_rate");
    if (cfg.training.optimizer != "adam") {
      throw ValidationError("training.optimizer: only \"adam\" is supported");
    }
    if (cfg.training.early_stopping_patience < 0) {
      throw ValidationError("training.early_stopping_patience: must be >= 0");
    }
    b.finish();
  }
  {
    Block b = top.child("federated");
    cfg.federated.enabled = b.get_or<bool>("enabled", false);
    cfg.federated.num_clients = b.get_or<int>("num_clients", 3);
    cfg.federated.num_rounds = b.get_or<int>("num_rounds", 5);
    cfg.federated.local_epochs = b.get_or<int>("local_epochs", 5);
    cfg.federated.client_lr =
        b.get_or<double>("client_lr", cfg.training.learning_rate);
    cfg.federated.data_partition =
        b.get_or<std::string>("data_partition", "dirichlet");
    cfg.federated.alpha = b.get_or<double>("alpha", 0.1);
    check_min(cfg.federated.num_clients, 1, "federated.num_clients");
    check_min(cfg.federated.num_rounds, 1, "federated.num_rounds");
    check_min(cfg.federated.local_epochs, 1, "federated.local_epochs");
    check_positive(cfg.federated.client_lr, "federated.client_lr");
    check_positive(cfg.federated.alpha, "federated.alpha");
    if (cfg.federated.data_partition != "dirichlet") {
      throw ValidationError(
          "federated.data_partition: only \"dirichlet\" is supported");
    }
    b.finish();
  }
  {
    Block b = top.child("secure_mpc");
    cfg.secure_mpc.enabled = b.get_or<bool>("enabled", false);
    cfg.secure_mpc.threshold = b.get_or<int>("threshold", 2);
    cfg.secure_mpc.total_shares =
        b.get_or<int>("total_shares", cfg.federated.num_clients);
    cfg.secure_mpc.quantization_bits = b.get_or<int>("quantization_bits", 16);
    cfg.secure_mpc.clip_range = b.get_or<double>("clip_range", 8.0);
    cfg.secure_mpc.dropout_resilience = b.get_or<int>(
        "dropout_resilience",
        cfg.secure_mpc.total_shares - cfg.secure_mpc.threshold);
    if (b.has("drop_clients")) {
      for (int id : b.get<std::vector<int>>("drop_clients")) {
        if (id < 1 || id > cfg.secure_mpc.total_shares) {
          throw ValidationError(
              "secure_mpc.drop_clients: client ids are 1.." +
              std::to_string(cfg.secure_mpc.total_shares));
        }
        cfg.secure_mpc.drop_clients.insert(static_cast<std::uint32_t>(id));
      }
    }
    b.finish();

    if (cfg.secure_mpc.enabled) {
      if (!cfg.federated.enabled) {
        throw ValidationError(
            "secure_mpc.enabled: requires federated.enabled = true");
      }
      check_min(cfg.secure_mpc.threshold, 1, "secure_mpc.threshold");
      if (cfg.secure_mpc.threshold > cfg.secure_mpc.total_shares) {
        throw ValidationError(
            "secure_mpc.threshold: must not exceed total_shares");
      }
      if (cfg.secure_mpc.total_shares != cfg.federated.num_clients) {
        throw ValidationError(
            "secure_mpc.total_shares: must equal federated.num_clients");
      }
      if (cfg.secure_mpc.dropout_resilience !=
          cfg.secure_mpc.total_shares - cfg.secure_mpc.threshold) {
        throw ValidationError(
            "secure_mpc.dropout_resilience: must equal total_shares - "
            "threshold");
      }
      if (cfg.secure_mpc.quantization_bits < 1 ||
          cfg.secure_mpc.quantization_bits > 59) {
        throw ValidationError(
            "secure_mpc.quantization_bits: must be in [1, 59]");
      }
      check_positive(cfg.secure_mpc.clip_range, "secure_mpc.clip_range");
    }
  }
  {
    Block b = top.child("differential_privacy");
    cfg.differential_privacy.enabled = b.get_or<bool>("enabled", false);
    if (cfg.differential_privacy.enabled) {
      cfg.differential_privacy.strategy = b.require<std::string>("strategy");
      parse_dp_strategy(cfg.differential_privacy.strategy);  // validates
      cfg.differential_privacy.epsilon = b.require<double>("epsilon");
      cfg.differential_privacy.delta = b.get_or<double>("delta", 1e-5);
      cfg.differential_privacy.noise_multiplier =
          b.get_or<double>("noise_multiplier", 1.0);
      cfg.differential_privacy.max_grad_norm =
          b.get_or<double>("max_grad_norm", 1.0);
      cfg.differential_privacy.lot_size = b.get_or<int>("lot_size", 32);
      cfg.differential_privacy.calibration =
          b.get_or<std::string>("calibration", "accountant");
      if (cfg.differential_privacy.calibration != "accountant" &&
          cfg.differential_privacy.calibration != "paper_formula") {
        throw ValidationError(
            "differential_privacy.calibration: must be \"accountant\" or "
            "\"paper_formula\"");
      }
    } else {
      // Known keys stay legal when the block is disabled, but the parsed
      // config normalizes to defaults so inert values cannot change hashes.
      for (const char* key : {"strategy", "epsilon", "delta",
                              "noise_multiplier", "max_grad_norm", "lot_size",
                              "calibration"}) {
        b.ignore(key);
      }
      cfg.differential_privacy = ExperimentConfig::DiffPrivacy{};
    }
    b.finish();

    if (cfg.differential_privacy.enabled) {
      cfg.dp_config()->validate();  // range checks with dp.* messages
      if (!cfg.federated.enabled) {
        throw ValidationError(
            "differential_privacy.enabled: this simulator applies DP inside "
            "federated runs; set federated.enabled = true");
      }
      const DpStrategy strategy =
          parse_dp_strategy(cfg.differential_privacy.strategy);
      if (cfg.secure_mpc.enabled &&
          (strategy == DpStrategy::CdpSf || strategy == DpStrategy::CdpSa)) {
        throw ValidationError(
            "differential_privacy.strategy: server-side strategies cannot be "
            "combined with secure_mpc");
      }
    }
  }
  {
    Block b = top.child("monitoring");
    cfg.monitoring.track_energy = b.get_or<bool>("track_energy", true);
    Block p = b.child("power_profile");
    cfg.monitoring.power_device =
        p.get_or<std::string>("device", "default-cpu");
    cfg.monitoring.power_watts = p.get_or<double>("watts", 70.0);
    cfg.monitoring.power_utilization = p.get_or<double>("utilization", 1.0);
    p.finish();
    cfg.monitoring.carbon_intensity =
        b.get_or<double>("carbon_intensity", 0.475);
    cfg.monitoring.failure_monitor = b.get_or<bool>("failure_monitor", true);
    if (cfg.monitoring.power_watts < 0) {
      throw ValidationError("monitoring.power_profile.watts: must be >= 0");
    }
    if (cfg.monitoring.power_utilization < 0 ||
        cfg.monitoring.power_utilization > 1) {
      throw ValidationError(
          "monitoring.power_profile.utilization: must be in [0, 1]");
    }
    if (cfg.monitoring.carbon_intensity < 0) {
      throw ValidationError("monitoring.carbon_intensity: must be >= 0");
    }
    b.finish();
  }
  top.finish();
  return cfg;
}

ExperimentConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("config: cannot open " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str());
}

ModelSpec ExperimentConfig::model_spec() const {
  ModelSpec spec;
  spec.kind = model.kind;
  spec.input_dim = model.input_dim;
  spec.hidden_dim = model.hidden_dim;
  spec.num_classes = model.num_classes;
  return spec;
}

std::optional<DpConfig> ExperimentConfig::dp_config() const {
  if (!differential_privacy.enabled) return std::nullopt;
  DpConfig dp;
  dp.strategy = parse_dp_strategy(differential_privacy.strategy);
  dp.epsilon = differential_privacy.epsilon;
  dp.delta = differential_privacy.delta;
  dp.noise_multiplier = differential_privacy.noise_multiplier;
  dp.max_grad_norm = differential_privacy.max_grad_norm;
  dp.lot_size = differential_privacy.lot_size;
  dp.calibration = differential_privacy.calibration == "paper_formula"
                       ? SigmaCalibration::PaperFormula
                       : SigmaCalibration::Accountant;
  return dp;
}

nlohmann::json ExperimentConfig::to_json() const {
  nlohmann::json j;
  j["experiment"] = {{"name", experiment.name},
                     {"description", experiment.description},
                     {"seed", experiment.seed},
                     {"output_dir", experiment.output_dir}};
  j["model"] = {{"kind", to_string(model.kind)},
                {"input_dim", model.input_dim},
                {"num_classes", model.num_classes}};
  if (model.kind == ModelKind::Mlp1) {
    j["model"]["hidden_dim"] = model.hidden_dim;
  }
  j["dataset"] = {{"source", dataset.source},
                  {"batch_size", dataset.batch_size},
                  {"train_fraction", dataset.train_fraction}};
  if (dataset.source == "csv") {
    j["dataset"]["path"] = dataset.path;
  } else {
    j["dataset"]["num_samples"] = dataset.num_samples;
    j["dataset"]["separation"] = dataset.separation;
  }
  j["training"] = {
      {"epochs", training.epochs},
      {"learning_rate", training.learning_rate},
      {"optimizer", training.optimizer},
      {"early_stopping_patience", training.early_stopping_patience}};
  j["federated"] = {{"enabled", federated.enabled},
                    {"num_clients", federated.num_clients},
                    {"num_rounds", federated.num_rounds},
                    {"local_epochs", federated.local_epochs},
                    {"client_lr", federated.client_lr},
                    {"data_partition", federated.data_partition},
                    {"alpha", federated.alpha}};
  j["secure_mpc"] = {
      {"enabled", secure_mpc.enabled},
      {"threshold", secure_mpc.threshold},
      {"total_shares", secure_mpc.total_shares},
      {"quantization_bits", secure_mpc.quantization_bits},
      {"clip_range", secure_mpc.clip_range},
      {"dropout_resilience", secure_mpc.dropout_resilience},
      {"drop_clients", secure_mpc.drop_clients}};
  j["differential_privacy"] = {
      {"enabled", differential_privacy.enabled},
      {"strategy", differential_privacy.strategy},
      {"epsilon", differential_privacy.epsilon},
      {"delta", differential_privacy.delta},
      {"noise_multiplier", differential_privacy.noise_multiplier},
      {"max_grad_norm", differential_privacy.max_grad_norm},
      {"lot_size", differential_privacy.lot_size},
      {"calibration", differential_privacy.calibration}};
  j["monitoring"] = {{"track_energy", monitoring.track_energy},
                     {"power_profile",
                      {{"device", monitoring.power_device},
                       {"watts", monitoring.power_watts},
                       {"utilization", monitoring.power_utilization}}},
                     {"carbon_intensity", monitoring.carbon_intensity},
                     {"failure_monitor", monitoring.failure_monitor}};
  return j;
}

std::string ExperimentConfig::config_hash() const {
  return sha256_hex(to_json().dump());
}

std::string ExperimentConfig::emit_yaml() const {
  YAML::Emitter out;
  out.SetDoublePrecision(17);
  out.SetFloatPrecision(9);
  out << YAML::BeginMap;
  out << YAML::Key << "experiment" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "name" << YAML::Value << experiment.name;
  out << YAML::Key << "description" << YAML::Value << experiment.description;
  out << YAML::Key << "seed" << YAML::Value << experiment.seed;
  out << YAML::Key << "output_dir" << YAML::Value << experiment.output_dir;
  out << YAML::EndMap;

  out << YAML::Key << "model" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "kind" << YAML::Value << to_string(model.kind);
  out << YAML::Key << "input_dim" << YAML::Value << model.input_dim;
  if (model.kind == ModelKind::Mlp1) {
    out << YAML::Key << "hidden_dim" << YAML::Value << model.hidden_dim;
  }
  out << YAML::Key << "num_classes" << YAML::Value << model.num_classes;
  out << YAML::EndMap;

  out << YAML::Key << "dataset" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "source" << YAML::Value << dataset.source;
  if (dataset.source == "csv") {
    out << YAML::Key << "path" << YAML::Value << dataset.path;
  } else {
    out << YAML::Key << "num_samples" << YAML::Value << dataset.num_samples;
    out << YAML::Key << "separation" << YAML::Value << dataset.separation;
  }
  out << YAML::Key << "batch_size" << YAML::Value << dataset.batch_size;
  out << YAML::Key << "train_fraction" << YAML::Value
      << dataset.train_fraction;
  out << YAML::EndMap;

  out << YAML::Key << "training" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "epochs" << YAML::Value << training.epochs;
  out << YAML::Key << "learning_rate" << YAML::Value << training.learning_rate;
  out << YAML::Key << "optimizer" << YAML::Value << training.optimizer;
  out << YAML::Key << "early_stopping_patience" << YAML::Value
      << training.early_stopping_patience;
  out << YAML::EndMap;

  out << YAML::Key << "federated" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "enabled" << YAML::Value << federated.enabled;
  out << YAML::Key << "num_clients" << YAML::Value << federated.num_clients;
  out << YAML::Key << "num_rounds" << YAML::Value << federated.num_rounds;
  out << YAML::Key << "local_epochs" << YAML::Value << federated.local_epochs;
  out << YAML::Key << "client_lr" << YAML::Value << federated.client_lr;
  out << YAML::Key << "data_partition" << YAML::Value
      << federated.data_partition;
  out << YAML::Key << "alpha" << YAML::Value << federated.alpha;
  out << YAML::EndMap;

  out << YAML::Key << "secure_mpc" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "enabled" << YAML::Value << secure_mpc.enabled;
  out << YAML::Key << "threshold" << YAML::Value << secure_mpc.threshold;
  out << YAML::Key << "total_shares" << YAML::Value << secure_mpc.total_shares;
  out << YAML::Key << "quantization_bits" << YAML::Value
      << secure_mpc.quantization_bits;
  out << YAML::Key << "clip_range" << YAML::Value << secure_mpc.clip_range;
  out << YAML::Key << "dropout_resilience" << YAML::Value
      << secure_mpc.dropout_resilience;
  out << YAML::Key << "drop_clients" << YAML::Value << YAML::BeginSeq;
  for (std::uint32_t id : secure_mpc.drop_clients) out << id;
  out << YAML::EndSeq;
  out << YAML::EndMap;

  out << YAML::Key << "differential_privacy" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "enabled" << YAML::Value
      << differential_privacy.enabled;
  if (differential_privacy.enabled) {
    out << YAML::Key << "strategy" << YAML::Value
        << differential_privacy.strategy;
    out << YAML::Key << "epsilon" << YAML::Value
        << differential_privacy.epsilon;
    out << YAML::Key << "delta" << YAML::Value << differential_privacy.delta;
    out << YAML::Key << "noise_multiplier" << YAML::Value
        << differential_privacy.noise_multiplier;
    out << YAML::Key << "max_grad_norm" << YAML::Value
        << differential_privacy.max_grad_norm;
    out << YAML::Key << "lot_size" << YAML::Value
        << differential_privacy.lot_size;
    out << YAML::Key << "calibration" << YAML::Value
        << differential_privacy.calibration;
  }
  out << YAML::EndMap;

  out << YAML::Key << "monitoring" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "track_energy" << YAML::Value << monitoring.track_energy;
  out << YAML::Key << "power_profile" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "device" << YAML::Value << monitoring.power_device;
  out << YAML::Key << "watts" << YAML::Value << monitoring.power_watts;
  out << YAML::Key << "utilization" << YAML::Value
      << monitoring.power_utilization;
  out << YAML::EndMap;
  out << YAML::Key << "carbon_intensity" << YAML::Value
      << monitoring.carbon_intensity;
  out << YAML::Key << "failure_monitor" << YAML::Value
      << monitoring.failure_monitor;
  out << YAML::EndMap;

  out << YAML::EndMap;
  return std::string(out.c_str()) + "\n";
}

}  // namespace fedbench
