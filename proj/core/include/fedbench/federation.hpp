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

#ifndef FEDBENCH_FEDERATION_HPP_
#define FEDBENCH_FEDERATION_HPP_

#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "fedbench/data.hpp"
#include "fedbench/dp.hpp"
#include "fedbench/model.hpp"
#include "fedbench/telemetry.hpp"

namespace fedbench {

struct FlConfig {
  int num_clients = 3;
  int num_rounds = 5;
  int local_epochs = 5;
  double client_lr = 1e-3;
  int batch_size = 32;
  double dirichlet_alpha = 0.1;
  bool failure_monitor = true;

  void validate() const;
};

// Secure-aggregation settings as seen by the driver. drop_clients (1-based
// ids) fail after masked input every round; a test hook, empty by default.
struct SmpcSettings {
  bool enabled = false;
  std::uint32_t threshold = 2;
  int quantization_bits = 16;
  double clip_range = 8.0;
  std::set<std::uint32_t> drop_clients;
};

struct RoundRecord {
  int round = 0;  // 0 is the pre-training evaluation
  double val_accuracy = 0.0;
  double val_loss = 0.0;
  double mean_update_norm = 0.0;  // raw client deltas, before any DP noise
  double wall_seconds = 0.0;
};

enum class RunStatus { Completed, FailedConvergence, Aborted };

std::string to_string(RunStatus status);

struct FederatedResult {
  ParamVector params;
  std::vector<RoundRecord> history;
  RunStatus status = RunStatus::Completed;
  std::string status_reason;
  std::optional<double> epsilon_spent;  // max over clients, when DP is on
};

// Early-failure detector over the validation accuracy history (entry 0 is
// the pre-training evaluation, entry r the state after round r). Pure
// function; `round_idx` must equal history.size() - 1.
std::pair<bool, std::string> monitor_convergence_failure(
    const std::vector<double>& val_acc_history, int round_idx);

// Weighted mean of updates, weights typically client sample counts.
// Weights are normalized before summing, so a single update is returned
// unchanged.
ParamVector fedavg_aggregate(const std::vector<ParamVector>& updates,
                             std::span<const double> weights);

// DP-SGD context for LDP-PE local training.
struct LdpPeContext {
  double clip = 1.0;
  double sigma = 1.0;  // noise multiplier; per-step noise std is sigma*clip
  int lot_size = 32;
  DeterministicStream* noise_stream = nullptr;
  RdpAccountant* accountant = nullptr;
};

// Local epochs of Adam from the global parameters; returns the parameter
// delta. Stream scope is "<scope>/epoch/<e>/shuffle" per epoch, matching
// train_centralized. When `dp` is set every step is a DP-SGD step.
ParamVector client_local_train(const ParamVector& global_params,
                               const ModelSpec& spec, const Dataset& data,
                               std::span<const int> client_indices,
                               int local_epochs, const TrainHyper& hyper,
                               std::uint64_t seed, const std::string& scope,
                               LdpPeContext* dp = nullptr);

// FedAvg over simulated clients with the aggregation pipeline selected by
// (smpc, dp): plain weighted averaging, secure aggregation, server-side DP
// (fixed or adaptive clipping), or local DP (whole-update or per-example).
// Local DP variants compose with secure aggregation; server-side DP does
// not (it needs plaintext client updates). A secure-aggregation abort or a
// monitor-triggered stop is reported in the result status, not thrown.
FederatedResult run_federated(const ModelSpec& spec, const Dataset& data,
                              std::span<const int> train_indices,
                              std::span<const int> val_indices,
                              const FlConfig& fl,
                              const std::optional<DpConfig>& dp,
                              const SmpcSettings& smpc, std::uint64_t seed,
                              ParamVector initial_params,
                              TelemetryCollector* telemetry = nullptr);

}  // namespace fedbench

#endif  // FEDBENCH_FEDERATION_HPP_
