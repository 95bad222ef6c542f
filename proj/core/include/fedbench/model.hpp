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

#ifndef FEDBENCH_MODEL_HPP_
#define FEDBENCH_MODEL_HPP_

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "fedbench/data.hpp"
#include "fedbench/rng.hpp"

namespace fedbench {

// Named segment of a flat parameter vector; a matrix of rows x cols values
// starting at `offset`.
struct ParamSegment {
  std::string name;
  std::size_t offset = 0;
  std::size_t rows = 0;
  std::size_t cols = 0;

  std::size_t size() const { return rows * cols; }
};

// Flat real-valued parameter (or update) vector with a named layout. The
// layout partitions the value array exactly; most consumers (clipping,
// noise, aggregation) treat the values as an opaque flat array.
struct ParamVector {
  std::vector<double> values;
  std::vector<ParamSegment> layout;

  std::size_t size() const { return values.size(); }
  std::span<double> segment(std::string_view name);
  std::span<const double> segment(std::string_view name) const;
};

double l2_norm(std::span<const double> v);

// c = a - b, elementwise; layouts must match in size.
ParamVector param_diff(const ParamVector& a, const ParamVector& b);

// a += scale * b
void add_scaled(ParamVector& a, const ParamVector& b, double scale);

enum class ModelKind { Logistic, Mlp1 };

// Differentiable classifier shape: multinomial logistic regression, or a
// one-hidden-layer ReLU MLP.
struct ModelSpec {
  ModelKind kind = ModelKind::Logistic;
  int input_dim = 0;
  int hidden_dim = 0;  // Mlp1 only
  int num_classes = 0;

  std::size_t param_count() const;
  void validate() const;
};

// Glorot-uniform weights, zero biases.
ParamVector init_params(const ModelSpec& spec, DeterministicStream& stream);

// Per-class probabilities for one sample.
std::vector<double> predict_proba(const ParamVector& params,
                                  const ModelSpec& spec,
                                  std::span<const double> features);

int predict_class(const ParamVector& params, const ModelSpec& spec,
                  std::span<const double> features);

// Mean cross-entropy over the batch and its exact gradient.
std::pair<double, ParamVector> loss_and_grad(const ParamVector& params,
                                             const ModelSpec& spec,
                                             const Dataset& data,
                                             std::span<const int> batch);

// One gradient per sample; their mean equals the batch gradient.
std::vector<ParamVector> per_sample_grads(const ParamVector& params,
                                          const ModelSpec& spec,
                                          const Dataset& data,
                                          std::span<const int> batch);

struct AdamState {
  std::vector<double> m;
  std::vector<double> v;
  std::int64_t t = 0;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  double lr = 1e-3;

  static AdamState create(std::size_t dim, double lr);
};

// Standard Adam update with bias correction; advances state.t.
void adam_step(ParamVector& params, const ParamVector& grad, AdamState& state);

struct EarlyStopState {
  double best_val_acc = -1.0;
  int epochs_since_improve = 0;
  int patience = 7;

  // Returns true while training should continue. Ties count as
  // non-improving; the first strictly-best epoch wins.
  bool observe(double val_acc);
};

struct TrainHyper {
  int epochs = 50;
  int batch_size = 32;
  double learning_rate = 1e-3;
  int patience = 7;
};

struct EpochRecord {
  int epoch = 0;
  double train_loss = 0.0;
  double val_accuracy = 0.0;
  double val_loss = 0.0;
};

struct TrainResult {
  ParamVector params;  // best validation accuracy (earliest on ties)
  std::vector<EpochRecord> history;
  bool early_stopped = false;
};

struct EvalResult {
  double accuracy = 0.0;
  double mean_loss = 0.0;
};

EvalResult evaluate(const ParamVector& params, const ModelSpec& spec,
                    const Dataset& data, std::span<const int> indices);

// Applies `step` to every minibatch of one shuffled epoch. The shuffle
// stream is "<scope>/epoch/<epoch>/shuffle" under the master seed, so the
// data order is a pure function of (seed, scope, epoch). Returns mean
// batch loss.
using BatchStep = std::function<double(std::span<const int> batch)>;
double run_shuffled_epoch(std::uint64_t seed, const std::string& scope,
                          int epoch, std::span<const int> indices,
                          int batch_size, const BatchStep& step);

// Centralized training: Adam over shuffled minibatches with early stopping
// on validation accuracy. `scope` names the randomness scope; the default
// makes a single-client one-round federated run use the same streams.
TrainResult train_centralized(
    const ModelSpec& spec, const Dataset& data,
    std::span<const int> train_indices, std::span<const int> val_indices,
    const TrainHyper& hyper, std::uint64_t seed, ParamVector initial_params,
    const std::string& scope = "client/0/round/1",
    const std::function<void(int, const ParamVector&)>& on_epoch = nullptr);

}  // namespace fedbench

#endif  // FEDBENCH_MODEL_HPP_
