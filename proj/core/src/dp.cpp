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

#include "fedbench/dp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "fedbench/error.hpp"

namespace fedbench {
namespace {

// log(sum(exp(terms))) without overflow.
double log_sum_exp(const std::vector<double>& terms) {
  const double m = *std::max_element(terms.begin(), terms.end());
  if (!std::isfinite(m)) return m;
  double s = 0.0;
  for (double t : terms) s += std::exp(t - m);
  return m + std::log(s);
}

double log_binomial(int n, int k) {
  return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

}  // namespace

void DpConfig::validate() const {
  if (!(epsilon > 0)) throw ValidationError("dp: epsilon must be > 0");
  if (!(delta > 0) || !(delta < 1)) {
    throw ValidationError("dp: delta must be in (0, 1)");
  }
  if (!(max_grad_norm > 0)) {
    throw ValidationError("dp: max_grad_norm must be > 0");
  }
  if (noise_multiplier < 0) {
    throw ValidationError("dp: noise_multiplier must be >= 0");
  }
  if (lot_size < 1) throw ValidationError("dp: lot_size must be >= 1");
}

double DpConfig::sigma_multiplier() const {
  if (calibration == SigmaCalibration::PaperFormula) {
    return noise_multiplier / epsilon;
  }
  return noise_multiplier;
}

double calibrate_sigma_paper(double max_grad_norm, double noise_multiplier,
                             double epsilon) {
  if (!(max_grad_norm > 0) || !(noise_multiplier > 0)) {
    throw ValidationError("calibrate_sigma: C and noise_multiplier must be > 0");
  }
  if (epsilon == 0) throw DomainError("calibrate_sigma: epsilon is zero");
  return max_grad_norm * noise_multiplier / epsilon;
}

ParamVector clip_to_norm(ParamVector v, double bound) {
  if (!(bound > 0)) throw ValidationError("clip: bound must be > 0");
  const double norm = l2_norm(v.values);
  if (norm > bound) {
    const double scale = bound / norm;
    for (double& x : v.values) x *= scale;
  }
  return v;
}

std::vector<ParamVector> clip_per_sample(std::vector<ParamVector> grads,
                                         double bound) {
  for (ParamVector& g : grads) g = clip_to_norm(std::move(g), bound);
  return grads;
}

void add_gaussian_noise(ParamVector& v, double sigma,
                        DeterministicStream& stream) {
  if (sigma < 0) throw ValidationError("noise: sigma must be >= 0");
  if (sigma == 0) return;
  for (double& x : v.values) x += sigma * stream.gaussian();
}

std::vector<double> RdpAccountant::default_orders() {
  std::vector<double> orders = {1.25, 1.5, 1.75};
  for (int a = 2; a <= 64; ++a) orders.push_back(static_cast<double>(a));
  return orders;
}

RdpAccountant::RdpAccountant(double sampling_rate, double sigma)
    : RdpAccountant(sampling_rate, sigma, default_orders()) {}

RdpAccountant::RdpAccountant(double sampling_rate, double sigma,
                             std::vector<double> orders)
    : sampling_rate_(sampling_rate),
      sigma_(sigma),
      orders_(std::move(orders)) {
  if (!(sampling_rate_ > 0) || sampling_rate_ > 1) {
    throw ValidationError("accountant: sampling rate must be in (0, 1]");
  }
  if (sigma_ < 0) throw ValidationError("accountant: sigma must be >= 0");
  if (orders_.empty()) throw ValidationError("accountant: empty order grid");
  for (double a : orders_) {
    if (!(a > 1)) throw ValidationError("accountant: orders must exceed 1");
  }
  rdp_.assign(orders_.size(), 0.0);
}

double RdpAccountant::per_step_rdp(double order) const {
  if (sigma_ == 0) return std::numeric_limits<double>::infinity();
  const double sigma_sq = sigma_ * sigma_;
  if (sampling_rate_ >= 1.0) {
    return order / (2.0 * sigma_sq);
  }
  // Subsampled Gaussian: exact binomial expansion at integer orders; a
  // fractional order is bounded by the next integer (rdp is nondecreasing
  // in the order).
  const int a = static_cast<int>(std::ceil(order));
  const double log_q = std::log(sampling_rate_);
  const double log_1mq = std::log1p(-sampling_rate_);
  std::vector<double> terms;
  terms.reserve(a + 1);
  for (int k = 0; k <= a; ++k) {
    terms.push_back(log_binomial(a, k) + (a - k) * log_1mq + k * log_q +
                    k * (k - 1) / (2.0 * sigma_sq));
  }
  return log_sum_exp(terms) / (a - 1.0);
}

void RdpAccountant::step(int count) {
  if (count < 0) throw ValidationError("accountant: negative step count");
  for (std::size_t i = 0; i < orders_.size(); ++i) {
    rdp_[i] += count * per_step_rdp(orders_[i]);
  }
  steps_ += count;
}

double RdpAccountant::epsilon(double delta) const {
  if (!(delta > 0) || !(delta < 1)) {
    throw ValidationError("accountant: delta must be in (0, 1)");
  }
  if (steps_ == 0) return 0.0;
  double best = std::numeric_limits<double>::infinity();
  const double log_inv_delta = std::log(1.0 / delta);
  for (std::size_t i = 0; i < orders_.size(); ++i) {
    best = std::min(best, rdp_[i] + log_inv_delta / (orders_[i] - 1.0));
  }
  return best;
}

ParamVector apply_cdp_sf(const std::vector<ParamVector>& updates, double clip,
                         double sigma, DeterministicStream& stream) {
  if (updates.empty()) throw ValidationError("cdp_sf: no updates");
  ParamVector mean = clip_to_norm(updates[0], clip);
  for (std::size_t i = 1; i < updates.size(); ++i) {
    add_scaled(mean, clip_to_norm(updates[i], clip), 1.0);
  }
  const double n = static_cast<double>(updates.size());
  for (double& x : mean.values) x /= n;
  add_gaussian_noise(mean, sigma * clip / n, stream);
  return mean;
}

std::pair<ParamVector, AdaptiveClipState> apply_cdp_sa(
    const std::vector<ParamVector>& updates, AdaptiveClipState state,
    double sigma, DeterministicStream& stream) {
  if (!(state.clip > 0)) throw ValidationError("cdp_sa: clip must be > 0");
  ParamVector result = apply_cdp_sf(updates, state.clip, sigma, stream);
  int clipped = 0;
  for (const ParamVector& u : updates) {
    if (l2_norm(u.values) > state.clip) ++clipped;
  }
  const double fraction = static_cast<double>(clipped) / updates.size();
  state.clip *= std::exp(-state.learning_rate *
                         (fraction - state.target_quantile));
  return {std::move(result), state};
}

ParamVector apply_ldp_mod(ParamVector update, double clip, double sigma,
                          DeterministicStream& stream) {
  update = clip_to_norm(std::move(update), clip);
  add_gaussian_noise(update, sigma, stream);
  return update;
}

void ldp_pe_local_step(ParamVector& params, const ModelSpec& spec,
                       const Dataset& data, std::span<const int> batch,
                       double clip, double sigma, int lot_size,
                       DeterministicStream& noise_stream, AdamState& adam,
                       RdpAccountant& accountant) {
  if (batch.empty()) throw ValidationError("ldp_pe: empty batch");
  if (static_cast<int>(batch.size()) > lot_size) {
    throw ValidationError("ldp_pe: batch larger than lot_size");
  }
  auto grads = clip_per_sample(per_sample_grads(params, spec, data, batch),
                               clip);
  ParamVector noisy_sum = grads[0];
  for (std::size_t i = 1; i < grads.size(); ++i) {
    add_scaled(noisy_sum, grads[i], 1.0);
  }
  add_gaussian_noise(noisy_sum, sigma * clip, noise_stream);
  for (double& x : noisy_sum.values) x /= static_cast<double>(lot_size);
  adam_step(params, noisy_sum, adam);
  accountant.step();
}

}  // namespace fedbench
