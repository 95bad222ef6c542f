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

#include "fedbench/model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "fedbench/error.hpp"

namespace fedbench {
namespace {

// Stable softmax from logits, in place.
void softmax_inplace(std::vector<double>& z) {
  const double zmax = *std::max_element(z.begin(), z.end());
  double sum = 0.0;
  for (double& v : z) {
    v = std::exp(v - zmax);
    sum += v;
  }
  for (double& v : z) v /= sum;
}

std::vector<double> logits(const ParamVector& params, const ModelSpec& spec,
                           std::span<const double> x,
                           std::vector<double>* hidden_out = nullptr) {
  const int K = spec.num_classes;
  if (spec.kind == ModelKind::Logistic) {
    auto w = params.segment("W");
    auto b = params.segment("b");
    std::vector<double> z(K);
    for (int k = 0; k < K; ++k) {
      double acc = b[k];
      const double* row = w.data() + static_cast<std::size_t>(k) * spec.input_dim;
      for (int d = 0; d < spec.input_dim; ++d) acc += row[d] * x[d];
      z[k] = acc;
    }
    return z;
  }
  const int H = spec.hidden_dim;
  auto w1 = params.segment("W1");
  auto b1 = params.segment("b1");
  auto w2 = params.segment("W2");
  auto b2 = params.segment("b2");
  std::vector<double> hidden(H);
  for (int h = 0; h < H; ++h) {
    double acc = b1[h];
    const double* row = w1.data() + static_cast<std::size_t>(h) * spec.input_dim;
    for (int d = 0; d < spec.input_dim; ++d) acc += row[d] * x[d];
    hidden[h] = acc > 0.0 ? acc : 0.0;
  }
  std::vector<double> z(K);
  for (int k = 0; k < K; ++k) {
    double acc = b2[k];
    const double* row = w2.data() + static_cast<std::size_t>(k) * H;
    for (int h = 0; h < H; ++h) acc += row[h] * hidden[h];
    z[k] = acc;
  }
  if (hidden_out) *hidden_out = std::move(hidden);
  return z;
}

// Accumulates the gradient of one sample's cross-entropy into `grad`
// (scaled by `weight`) and returns the sample's loss.
double accumulate_sample_grad(const ParamVector& params, const ModelSpec& spec,
                              std::span<const double> x, int label,
                              double weight, ParamVector& grad) {
  std::vector<double> hidden;
  std::vector<double> p = logits(params, spec, x, &hidden);
  // log-softmax for the loss
  const double zmax = *std::max_element(p.begin(), p.end());
  double lse = 0.0;
  for (double v : p) lse += std::exp(v - zmax);
  lse = zmax + std::log(lse);
  const double loss = lse - p[label];
  softmax_inplace(p);
  p[label] -= 1.0;  // dL/dz

  const int K = spec.num_classes;
  if (spec.kind == ModelKind::Logistic) {
    auto gw = grad.segment("W");
    auto gb = grad.segment("b");
    for (int k = 0; k < K; ++k) {
      const double dz = p[k] * weight;
      double* row = gw.data() + static_cast<std::size_t>(k) * spec.input_dim;
      for (int d = 0; d < spec.input_dim; ++d) row[d] += dz * x[d];
      gb[k] += dz;
    }
    return loss;
  }
  const int H = spec.hidden_dim;
  auto w2 = params.segment("W2");
  auto gw1 = grad.segment("W1");
  auto gb1 = grad.segment("b1");
  auto gw2 = grad.segment("W2");
  auto gb2 = grad.segment("b2");
  std::vector<double> dhidden(H, 0.0);
  for (int k = 0; k < K; ++k) {
    const double dz = p[k];
    double* grow = gw2.data() + static_cast<std::size_t>(k) * H;
    const double* wrow = w2.data() + static_cast<std::size_t>(k) * H;
    for (int h = 0; h < H; ++h) {
      grow[h] += dz * weight * hidden[h];
      dhidden[h] += dz * wrow[h];
    }
    gb2[k] += dz * weight;
  }
  for (int h = 0; h < H; ++h) {
    if (hidden[h] <= 0.0) continue;  // ReLU gate
    const double dpre = dhidden[h] * weight;
    double* row = gw1.data() + static_cast<std::size_t>(h) * spec.input_dim;
    for (int d = 0; d < spec.input_dim; ++d) row[d] += dpre * x[d];
    gb1[h] += dpre;
  }
  return loss;
}

ParamVector zeros_like(const ParamVector& p) {
  ParamVector z;
  z.values.assign(p.values.size(), 0.0);
  z.layout = p.layout;
  return z;
}

}  // namespace

std::span<double> ParamVector::segment(std::string_view name) {
  for (const ParamSegment& seg : layout) {
    if (seg.name == name) return {values.data() + seg.offset, seg.size()};
  }
  throw Error("ParamVector: unknown segment \"" + std::string(name) + "\"");
}

std::span<const double> ParamVector::segment(std::string_view name) const {
  for (const ParamSegment& seg : layout) {
    if (seg.name == name) return {values.data() + seg.offset, seg.size()};
  }
  throw Error("ParamVector: unknown segment \"" + std::string(name) + "\"");
}

double l2_norm(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

ParamVector param_diff(const ParamVector& a, const ParamVector& b) {
  if (a.values.size() != b.values.size()) {
    throw Error("param_diff: size mismatch");
  }
  ParamVector out = a;
  for (std::size_t i = 0; i < out.values.size(); ++i) {
    out.values[i] -= b.values[i];
  }
  return out;
}

void add_scaled(ParamVector& a, const ParamVector& b, double scale) {
  if (a.values.size() != b.values.size()) {
    throw Error("add_scaled: size mismatch");
  }
  for (std::size_t i = 0; i < a.values.size(); ++i) {
    a.values[i] += scale * b.values[i];
  }
}

std::size_t ModelSpec::param_count() const {
  if (kind == ModelKind::Logistic) {
    return static_cast<std::size_t>(num_classes) * input_dim + num_classes;
  }
  return static_cast<std::size_t>(hidden_dim) * input_dim + hidden_dim +
         static_cast<std::size_t>(num_classes) * hidden_dim + num_classes;
}

void ModelSpec::validate() const {
  if (input_dim < 1) throw ValidationError("model: input_dim must be >= 1");
  if (num_classes < 2) throw ValidationError("model: num_classes must be >= 2");
  if (kind == ModelKind::Mlp1 && hidden_dim < 1) {
    throw ValidationError("model: hidden_dim must be >= 1 for mlp1");
  }
}

ParamVector init_params(const ModelSpec& spec, DeterministicStream& stream) {
  spec.validate();
  ParamVector p;
  auto add_segment = [&p](const std::string& name, std::size_t rows,
                          std::size_t cols) {
    p.layout.push_back({name, p.values.size(), rows, cols});
    p.values.resize(p.values.size() + rows * cols, 0.0);
  };
  auto glorot_fill = [&](std::string_view name, std::size_t fan_in,
                         std::size_t fan_out) {
    const double bound = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
    for (double& w : p.segment(name)) {
      w = (2.0 * stream.uniform() - 1.0) * bound;
    }
  };
  if (spec.kind == ModelKind::Logistic) {
    add_segment("W", spec.num_classes, spec.input_dim);
    add_segment("b", spec.num_classes, 1);
    glorot_fill("W", spec.input_dim, spec.num_classes);
  } else {
    add_segment("W1", spec.hidden_dim, spec.input_dim);
    add_segment("b1", spec.hidden_dim, 1);
    add_segment("W2", spec.num_classes, spec.hidden_dim);
    add_segment("b2", spec.num_classes, 1);
    glorot_fill("W1", spec.input_dim, spec.hidden_dim);
    glorot_fill("W2", spec.hidden_dim, spec.num_classes);
  }
  return p;
}

std::vector<double> predict_proba(const ParamVector& params,
                                  const ModelSpec& spec,
                                  std::span<const double> features) {
  std::vector<double> z = logits(params, spec, features);
  softmax_inplace(z);
  return z;
}

int predict_class(const ParamVector& params, const ModelSpec& spec,
                  std::span<const double> features) {
  std::vector<double> z = logits(params, spec, features);
  return static_cast<int>(
      std::max_element(z.begin(), z.end()) - z.begin());
}

std::pair<double, ParamVector> loss_and_grad(const ParamVector& params,
                                             const ModelSpec& spec,
                                             const Dataset& data,
                                             std::span<const int> batch) {
  if (batch.empty()) throw ValidationError("loss_and_grad: empty batch");
  ParamVector grad = zeros_like(params);
  const double weight = 1.0 / static_cast<double>(batch.size());
  double loss = 0.0;
  for (int idx : batch) {
    auto x = data.row(idx);
    for (double v : x) {
      if (!std::isfinite(v)) {
        throw ValidationError("loss_and_grad: non-finite feature value");
      }
    }
    loss += accumulate_sample_grad(params, spec, x, data.labels[idx], weight,
                                   grad);
  }
  return {loss * weight, std::move(grad)};
}

std::vector<ParamVector> per_sample_grads(const ParamVector& params,
                                          const ModelSpec& spec,
                                          const Dataset& data,
                                          std::span<const int> batch) {
  std::vector<ParamVector> grads;
  grads.reserve(batch.size());
  for (int idx : batch) {
    ParamVector g = zeros_like(params);
    accumulate_sample_grad(params, spec, data.row(idx), data.labels[idx], 1.0,
                           g);
    grads.push_back(std::move(g));
  }
  return grads;
}

AdamState AdamState::create(std::size_t dim, double lr) {
  AdamState s;
  s.m.assign(dim, 0.0);
  s.v.assign(dim, 0.0);
  s.lr = lr;
  return s;
}

void adam_step(ParamVector& params, const ParamVector& grad, AdamState& state) {
  if (params.values.size() != grad.values.size() ||
      params.values.size() != state.m.size()) {
    throw Error("adam_step: shape mismatch");
  }
  state.t += 1;
  const double bc1 = 1.0 - std::pow(state.beta1, static_cast<double>(state.t));
  const double bc2 = 1.0 - std::pow(state.beta2, static_cast<double>(state.t));
  for (std::size_t i = 0; i < params.values.size(); ++i) {
    const double g = grad.values[i];
    state.m[i] = state.beta1 * state.m[i] + (1.0 - state.beta1) * g;
    state.v[i] = state.beta2 * state.v[i] + (1.0 - state.beta2) * g * g;
    const double mhat = state.m[i] / bc1;
    const double vhat = state.v[i] / bc2;
    params.values[i] -= state.lr * mhat / (std::sqrt(vhat) + state.eps);
  }
}

bool EarlyStopState::observe(double val_acc) {
  if (val_acc > best_val_acc) {
    best_val_acc = val_acc;
    epochs_since_improve = 0;
  } else {
    epochs_since_improve += 1;
  }
  return epochs_since_improve <= patience;
}

EvalResult evaluate(const ParamVector& params, const ModelSpec& spec,
                    const Dataset& data, std::span<const int> indices) {
  if (indices.empty()) throw ValidationError("evaluate: empty index set");
  EvalResult result;
  double loss = 0.0;
  int correct = 0;
  for (int idx : indices) {
    std::vector<double> z = logits(params, spec, data.row(idx));
    const double zmax = *std::max_element(z.begin(), z.end());
    double lse = 0.0;
    for (double v : z) lse += std::exp(v - zmax);
    loss += zmax + std::log(lse) - z[data.labels[idx]];
    const int pred =
        static_cast<int>(std::max_element(z.begin(), z.end()) - z.begin());
    if (pred == data.labels[idx]) ++correct;
  }
  result.accuracy = static_cast<double>(correct) / indices.size();
  result.mean_loss = loss / indices.size();
  return result;
}

double run_shuffled_epoch(std::uint64_t seed, const std::string& scope,
                          int epoch, std::span<const int> indices,
                          int batch_size, const BatchStep& step) {
  DeterministicStream shuffle_stream = derive_stream(
      seed, scope + "/epoch/" + std::to_string(epoch) + "/shuffle");
  std::vector<int> order(indices.begin(), indices.end());
  for (std::size_t i = order.size(); i > 1; --i) {
    std::size_t j = shuffle_stream.uniform_below(i);
    std::swap(order[i - 1], order[j]);
  }
  double loss_sum = 0.0;
  int batches = 0;
  for (std::size_t start = 0; start < order.size();
       start += static_cast<std::size_t>(batch_size)) {
    const std::size_t end =
        std::min(order.size(), start + static_cast<std::size_t>(batch_size));
    loss_sum += step(std::span<const int>(order.data() + start, end - start));
    ++batches;
  }
  return batches > 0 ? loss_sum / batches : 0.0;
}

TrainResult train_centralized(
    const ModelSpec& spec, const Dataset& data,
    std::span<const int> train_indices, std::span<const int> val_indices,
    const TrainHyper& hyper, std::uint64_t seed, ParamVector initial_params,
    const std::string& scope,
    const std::function<void(int, const ParamVector&)>& on_epoch) {
  if (train_indices.empty()) {
    throw ValidationError("train: empty training set");
  }
  TrainResult result;
  ParamVector params = std::move(initial_params);
  AdamState adam = AdamState::create(params.size(), hyper.learning_rate);
  EarlyStopState stop;
  stop.patience = hyper.patience;
  result.params = params;

  for (int epoch = 1; epoch <= hyper.epochs; ++epoch) {
    const double train_loss = run_shuffled_epoch(
        seed, scope, epoch, train_indices, hyper.batch_size,
        [&](std::span<const int> batch) {
          auto [loss, grad] = loss_and_grad(params, spec, data, batch);
          adam_step(params, grad, adam);
          return loss;
        });
    const EvalResult val = evaluate(params, spec, data, val_indices);
    result.history.push_back({epoch, train_loss, val.accuracy, val.mean_loss});
    if (on_epoch) on_epoch(epoch, params);
    const bool was_best = val.accuracy > stop.best_val_acc;
    const bool keep_going = stop.observe(val.accuracy);
    if (was_best) result.params = params;
    if (!keep_going) {
      result.early_stopped = true;
      break;
    }
  }
  return result;
}

}  // namespace fedbench
