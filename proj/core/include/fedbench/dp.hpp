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

#ifndef FEDBENCH_DP_HPP_
#define FEDBENCH_DP_HPP_

#include <optional>
#include <string>
#include <vector>

#include "fedbench/data.hpp"
#include "fedbench/model.hpp"
#include "fedbench/rng.hpp"

namespace fedbench {

enum class DpStrategy { CdpSf, CdpSa, LdpMod, LdpPe };

// How the Gaussian scale is derived from the config:
//   Accountant:   sigma multiplier = noise_multiplier (privacy spend is then
//                 tracked by the RDP ledger);
//   PaperFormula: sigma multiplier = noise_multiplier / epsilon, i.e. the
//                 noise standard deviation is C * noise_multiplier / epsilon.
// The two conventions are not equivalent; the config selects one.
enum class SigmaCalibration { Accountant, PaperFormula };

struct DpConfig {
  DpStrategy strategy = DpStrategy::CdpSf;
  double epsilon = 1.0;
  double delta = 1e-5;
  double noise_multiplier = 1.0;
  double max_grad_norm = 1.0;  // clipping bound C
  int lot_size = 32;
  SigmaCalibration calibration = SigmaCalibration::Accountant;

  void validate() const;

  // Effective sigma multiplier per the calibration mode; the noise standard
  // deviation applied to a C-sensitive quantity is multiplier * C.
  double sigma_multiplier() const;
};

// sigma = C * noise_multiplier / epsilon.
double calibrate_sigma_paper(double max_grad_norm, double noise_multiplier,
                             double epsilon);

// Scales each gradient to L2 norm at most `bound`; identity inside the ball.
std::vector<ParamVector> clip_per_sample(std::vector<ParamVector> grads,
                                         double bound);

// Whole-vector L2 clip.
ParamVector clip_to_norm(ParamVector v, double bound);

// v + N(0, sigma^2) per coordinate, drawn from `stream`.
void add_gaussian_noise(ParamVector& v, double sigma,
                        DeterministicStream& stream);

// Renyi-DP ledger for the (subsampled) Gaussian mechanism.
//
// Per step at sampling rate q = 1 the cost at order a is a / (2 sigma^2);
// for q < 1 the standard subsampled-Gaussian upper bound is used (exact
// binomial expansion at integer orders, rounded up to the next integer
// order elsewhere). Composition is additive; conversion to (epsilon, delta)
// minimizes rdp(a) + log(1/delta) / (a - 1) over the order grid.
class RdpAccountant {
 public:
  RdpAccountant(double sampling_rate, double sigma);
  RdpAccountant(double sampling_rate, double sigma,
                std::vector<double> orders);

  static std::vector<double> default_orders();

  void step(int count = 1);
  double epsilon(double delta) const;

  int steps() const { return steps_; }
  double sampling_rate() const { return sampling_rate_; }
  double sigma() const { return sigma_; }
  const std::vector<double>& orders() const { return orders_; }
  const std::vector<double>& rdp() const { return rdp_; }

 private:
  double per_step_rdp(double order) const;

  double sampling_rate_;
  double sigma_;
  std::vector<double> orders_;
  std::vector<double> rdp_;
  int steps_ = 0;
};

// Server-side fixed clipping: clip each client update to C, average, then
// add N(0, (sigma * C / n)^2) per coordinate to the mean.
ParamVector apply_cdp_sf(const std::vector<ParamVector>& updates, double clip,
                         double sigma, DeterministicStream& stream);

struct AdaptiveClipState {
  double clip = 1.0;            // current C
  double target_quantile = 0.5; // gamma
  double learning_rate = 0.2;   // eta_C
};

// Server-side adaptive clipping: CDP-SF at the current bound, then a
// geometric update C <- C * exp(-eta * (fraction_clipped - gamma)).
std::pair<ParamVector, AdaptiveClipState> apply_cdp_sa(
    const std::vector<ParamVector>& updates, AdaptiveClipState state,
    double sigma, DeterministicStream& stream);

// Client-side local DP on a whole update: clip to C, then N(0, sigma^2)
// per coordinate. `sigma` here is the full noise standard deviation.
ParamVector apply_ldp_mod(ParamVector update, double clip, double sigma,
                          DeterministicStream& stream);

// One DP-SGD step: per-sample clip to C, sum, add N(0, (sigma*C)^2) per
// coordinate, divide by lot_size, feed to Adam. Advances the accountant by
// one step.
void ldp_pe_local_step(ParamVector& params, const ModelSpec& spec,
                       const Dataset& data, std::span<const int> batch,
                       double clip, double sigma, int lot_size,
                       DeterministicStream& noise_stream, AdamState& adam,
                       RdpAccountant& accountant);

}  // namespace fedbench

#endif  // FEDBENCH_DP_HPP_
