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

#include "fedbench/federation.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>

#include "fedbench/error.hpp"
#include "fedbench/secagg.hpp"

namespace fedbench {

void FlConfig::validate() const {
  if (num_clients < 1) throw ValidationError("fl: num_clients must be >= 1");
  if (num_rounds < 1) throw ValidationError("fl: num_rounds must be >= 1");
  if (local_epochs < 1) throw ValidationError("fl: local_epochs must be >= 1");
  if (batch_size < 1) throw ValidationError("fl: batch_size must be >= 1");
  if (!(client_lr > 0)) throw ValidationError("fl: client_lr must be > 0");
  if (!(dirichlet_alpha > 0)) throw ValidationError("fl: alpha must be > 0");
}

std::string to_string(RunStatus status) {
  switch (status) {
    case RunStatus::Completed:
      return "completed";
    case RunStatus::FailedConvergence:
      return "failed_convergence";
    case RunStatus::Aborted:
      return "aborted";
  }
  return "unknown";
}

std::pair<bool, std::string> monitor_convergence_failure(
    const std::vector<double>& val_acc_history, int round_idx) {
  if (static_cast<int>(val_acc_history.size()) != round_idx + 1) {
    throw ValidationError("monitor: history length must be round_idx + 1");
  }
  if (round_idx >= 2) {
    const bool all_low =
        std::all_of(val_acc_history.end() - 3, val_acc_history.end(),
                    [](double acc) { return acc < 0.3; });
    if (all_low) return {true, "Accuracy below threshold for 3 rounds"};
  }
  if (round_idx >= 3 && val_acc_history.back() <= val_acc_history.front()) {
    return {true, "No improvement from initialization"};
  }
  return {false, "Continuing training"};
}

ParamVector fedavg_aggregate(const std::vector<ParamVector>& updates,
                             std::span<const double> weights) {
  if (updates.empty()) throw ValidationError("fedavg: no updates");
  if (updates.size() != weights.size()) {
    throw ValidationError("fedavg: one weight per update required");
  }
  double total = 0.0;
  for (double w : weights) {
    if (!(w > 0)) throw ValidationError("fedavg: weights must be positive");
    total += w;
  }
  ParamVector agg = updates[0];
  for (double& x : agg.values) x *= weights[0] / total;
  for (std::size_t i = 1; i < updates.size(); ++i) {
    if (updates[i].size() != agg.size()) {
      throw ValidationError("fedavg: update dimension mismatch");
    }
    add_scaled(agg, updates[i], weights[i] / total);
  }
  return agg;
}

ParamVector client_local_train(const ParamVector& global_params,
                               const ModelSpec& spec, const Dataset& data,
                               std::span<const int> client_indices,
                               int local_epochs, const TrainHyper& hyper,
                               std::uint64_t seed, const std::string& scope,
                               LdpPeContext* dp) {
  if (client_indices.empty()) {
    throw ValidationError("local train: client has no data");
  }
  ParamVector params = global_params;
  AdamState adam = AdamState::create(params.size(), hyper.learning_rate);
  for (int epoch = 1; epoch <= local_epochs; ++epoch) {
    run_shuffled_epoch(seed, scope, epoch, client_indices, hyper.batch_size,
                       [&](std::span<const int> batch) {
                         if (dp) {
                           ldp_pe_local_step(params, spec, data, batch,
                                             dp->clip, dp->sigma, dp->lot_size,
                                             *dp->noise_stream, adam,
                                             *dp->accountant);
                           return 0.0;
                         }
                         auto [loss, grad] =
                             loss_and_grad(params, spec, data, batch);
                         adam_step(params, grad, adam);
                         return loss;
                       });
  }
  return param_diff(params, global_params);
}

FederatedResult run_federated(const ModelSpec& spec, const Dataset& data,
                              std::span<const int> train_indices,
                              std::span<const int> val_indices,
                              const FlConfig& fl,
                              const std::optional<DpConfig>& dp,
                              const SmpcSettings& smpc, std::uint64_t seed,
                              ParamVector initial_params,
                              TelemetryCollector* telemetry) {
  fl.validate();
  if (dp) dp->validate();
  if (smpc.enabled && dp &&
      (dp->strategy == DpStrategy::CdpSf || dp->strategy == DpStrategy::CdpSa)) {
    throw ValidationError(
        "server-side DP needs plaintext updates and cannot be combined with "
        "secure aggregation");
  }

  DeterministicStream partition_stream = derive_stream(seed, "data/partition");
  Partition partition =
      dirichlet_partition(data.labels, train_indices, fl.num_clients,
                          fl.dirichlet_alpha, partition_stream);

  std::vector<double> weights;
  for (const auto& assignment : partition.assignments) {
    weights.push_back(static_cast<double>(assignment.size()));
  }
  const double weight_total =
      std::accumulate(weights.begin(), weights.end(), 0.0);

  FederatedResult result;
  result.params = std::move(initial_params);

  TrainHyper local_hyper;
  local_hyper.batch_size = fl.batch_size;
  local_hyper.learning_rate = fl.client_lr;

  // Server-side DP state.
  AdaptiveClipState sa_state;
  std::optional<RdpAccountant> server_accountant;
  std::vector<RdpAccountant> client_accountants;
  if (dp) {
    sa_state.clip = dp->max_grad_norm;
    if (dp->strategy == DpStrategy::CdpSf || dp->strategy == DpStrategy::CdpSa ||
        dp->strategy == DpStrategy::LdpMod) {
      server_accountant.emplace(1.0, dp->sigma_multiplier());
    } else {
      for (int c = 0; c < fl.num_clients; ++c) {
        const double size =
            static_cast<double>(partition.assignments[c].size());
        // Clients smaller than the lot train on full batches of their data.
        const double rate = std::min(1.0, dp->lot_size / size);
        client_accountants.emplace_back(rate, dp->sigma_multiplier());
      }
    }
  }

  {
    const EvalResult initial = evaluate(result.params, spec, data, val_indices);
    result.history.push_back({0, initial.accuracy, initial.mean_loss, 0.0, 0.0});
  }
  std::vector<double> acc_history = {result.history[0].val_accuracy};

  for (int round = 1; round <= fl.num_rounds; ++round) {
    const auto round_start = std::chrono::steady_clock::now();
    std::vector<ParamVector> updates;
    double norm_sum = 0.0;

    for (int c = 0; c < fl.num_clients; ++c) {
      const std::string scope =
          "client/" + std::to_string(c) + "/round/" + std::to_string(round);
      ParamVector delta;
      if (dp && dp->strategy == DpStrategy::LdpPe) {
        DeterministicStream noise_stream =
            derive_stream(seed, "dp/" + scope + "/noise");
        LdpPeContext ctx;
        ctx.clip = dp->max_grad_norm;
        ctx.sigma = dp->sigma_multiplier();
        ctx.lot_size = std::min<int>(
            dp->lot_size,
            static_cast<int>(partition.assignments[c].size()));
        ctx.noise_stream = &noise_stream;
        ctx.accountant = &client_accountants[c];
        TrainHyper dp_hyper = local_hyper;
        dp_hyper.batch_size = ctx.lot_size;
        delta = client_local_train(result.params, spec, data,
                                   partition.assignments[c], fl.local_epochs,
                                   dp_hyper, seed, scope, &ctx);
      } else {
        delta = client_local_train(result.params, spec, data,
                                   partition.assignments[c], fl.local_epochs,
                                   local_hyper, seed, scope);
      }
      norm_sum += l2_norm(delta.values);
      if (dp && dp->strategy == DpStrategy::LdpMod) {
        DeterministicStream noise_stream =
            derive_stream(seed, "dp/" + scope + "/noise");
        delta = apply_ldp_mod(std::move(delta), dp->max_grad_norm,
                              dp->sigma_multiplier() * dp->max_grad_norm,
                              noise_stream);
      }
      updates.push_back(std::move(delta));
    }

    ParamVector aggregated;
    if (dp && dp->strategy == DpStrategy::CdpSf) {
      DeterministicStream noise_stream =
          derive_stream(seed, "dp/round/" + std::to_string(round) + "/server_noise");
      aggregated = apply_cdp_sf(updates, dp->max_grad_norm,
                                dp->sigma_multiplier(), noise_stream);
      server_accountant->step();
    } else if (dp && dp->strategy == DpStrategy::CdpSa) {
      DeterministicStream noise_stream =
          derive_stream(seed, "dp/round/" + std::to_string(round) + "/server_noise");
      auto [agg, next_state] =
          apply_cdp_sa(updates, sa_state, dp->sigma_multiplier(), noise_stream);
      aggregated = std::move(agg);
      sa_state = next_state;
      server_accountant->step();
    } else if (smpc.enabled) {
      if (dp && dp->strategy == DpStrategy::LdpMod) server_accountant->step();
      // Weighted averaging through the masked sum: each client pre-scales
      // its delta by n * w_i / sum(w); the unmasked sum divided by the
      // survivor count is then the weighted mean (exactly, absent drops).
      DeterministicStream session_stream =
          derive_stream(seed, "secagg/round/" + std::to_string(round));
      SecAggConfig sa_config;
      sa_config.num_clients = static_cast<std::uint32_t>(fl.num_clients);
      sa_config.threshold = smpc.threshold;
      sa_config.dim = result.params.size();
      FixedPointCodec codec(smpc.clip_range, smpc.quantization_bits);
      SecAggSession session =
          SecAggSession::setup(sa_config, codec, session_stream);
      std::vector<std::vector<double>> inputs;
      for (int c = 0; c < fl.num_clients; ++c) {
        const double scale = fl.num_clients * weights[c] / weight_total;
        std::vector<double> scaled = updates[c].values;
        for (double& x : scaled) x *= scale;
        inputs.push_back(std::move(scaled));
      }
      try {
        const std::vector<double> sum =
            simulate_round(session, inputs, smpc.drop_clients);
        aggregated = updates[0];  // layout template
        const double survivors =
            static_cast<double>(session.survivor_set().size());
        for (std::size_t i = 0; i < sum.size(); ++i) {
          aggregated.values[i] = sum[i] / survivors;
        }
      } catch (const SessionAbortError& abort) {
        result.status = RunStatus::Aborted;
        result.status_reason = abort.what();
        break;
      }
    } else {
      if (dp && dp->strategy == DpStrategy::LdpMod) server_accountant->step();
      aggregated = fedavg_aggregate(updates, weights);
    }

    add_scaled(result.params, aggregated, 1.0);

    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                      round_start)
            .count();
    if (telemetry) telemetry->add("round", wall);
    const EvalResult eval = evaluate(result.params, spec, data, val_indices);
    result.history.push_back({round, eval.accuracy, eval.mean_loss,
                              norm_sum / fl.num_clients, wall});
    acc_history.push_back(eval.accuracy);

    if (fl.failure_monitor) {
      auto [failed, reason] = monitor_convergence_failure(acc_history, round);
      if (failed) {
        result.status = RunStatus::FailedConvergence;
        result.status_reason = reason;
        break;
      }
    }
  }

  if (dp) {
    if (server_accountant) {
      result.epsilon_spent = server_accountant->epsilon(dp->delta);
    } else {
      double worst = 0.0;
      for (const RdpAccountant& acct : client_accountants) {
        worst = std::max(worst, acct.epsilon(dp->delta));
      }
      result.epsilon_spent = worst;
    }
  }
  return result;
}

}  // namespace fedbench
