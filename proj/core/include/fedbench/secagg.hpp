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

#ifndef FEDBENCH_SECAGG_HPP_
#define FEDBENCH_SECAGG_HPP_

#include <map>
#include <set>
#include <span>
#include <utility>
#include <vector>

#include "fedbench/field.hpp"
#include "fedbench/rng.hpp"
#include "fedbench/shamir.hpp"

namespace fedbench {

// Masked-sum secure aggregation over a simulated in-process network.
//
// Three rounds: setup (seed agreement and Shamir sharing of every seed),
// masked input (each client submits its quantized vector plus pairwise and
// self masks), unmasking (the server removes self masks of survivors and
// pairwise masks owed to dropouts, then dequantizes the sum). Up to
// n - threshold clients may drop after submitting their masked input.
//
// Client ids are 1..n and double as Shamir evaluation points.

enum class SecAggRound { Setup, MaskedInput, Unmasking, Done };

struct SecAggConfig {
  std::uint32_t num_clients = 0;
  std::uint32_t threshold = 0;
  std::size_t dim = 0;
};

struct MaskedVector {
  std::uint32_t sender = 0;
  std::vector<FieldElement> payload;  // length = session dim
};

// Shares surrendered during unmasking: self-mask seed shares for survivors,
// pairwise seed shares for dropouts. Revealing both kinds for the same
// client would let the server unmask that client's individual input, so
// unmask() rejects such a set.
struct RevealedShares {
  std::map<std::uint32_t, std::vector<Share>> self_mask;
  std::map<std::pair<std::uint32_t, std::uint32_t>, std::vector<Share>>
      pairwise;  // keyed by (i, j), i < j
};

class SecAggSession {
 public:
  // Performs the setup round: draws one pairwise seed per client pair and
  // one self-mask seed per client, Shamir-shares every seed across all
  // clients, and advances to MaskedInput.
  static SecAggSession setup(const SecAggConfig& config,
                             const FixedPointCodec& codec,
                             DeterministicStream& stream);

  // Round 2, client side. Returns the client's quantized input plus all of
  // its masks. Duplicate submission or a wrong-length vector is a protocol
  // error.
  MaskedVector mask_input(std::uint32_t client, std::span<const double> values);

  // Transition to unmasking with the given survivor set. Aborts the
  // session (typed error) if fewer than threshold clients survive.
  void begin_unmasking(const std::set<std::uint32_t>& survivors);

  // Shares the surviving clients would surrender for this survivor set:
  // self-mask shares of every survivor and pairwise shares of every
  // dropout, each taken from the first `threshold` surviving holders.
  RevealedShares collect_revealed_shares() const;

  // Round 3, server side. Sums the survivors' masked payloads, strips
  // masks using the revealed shares, and returns the dequantized sum of
  // the survivors' clamped inputs. Advances to Done.
  std::vector<double> unmask(const std::vector<MaskedVector>& messages,
                             const RevealedShares& revealed);

  SecAggRound round() const { return round_; }
  const std::set<std::uint32_t>& survivor_set() const { return survivors_; }
  std::size_t dim() const { return config_.dim; }
  const SecAggConfig& config() const { return config_; }
  const FixedPointCodec& codec() const { return codec_; }

 private:
  SecAggSession(const SecAggConfig& config, const FixedPointCodec& codec);

  SecAggConfig config_;
  FixedPointCodec codec_;
  SharingParams sharing_;
  SecAggRound round_ = SecAggRound::Setup;
  std::set<std::uint32_t> survivors_;
  std::set<std::uint32_t> submitted_;

  // Simulated trusted setup: seeds and the full share tables live in the
  // session; clients and server only ever see their protocol-visible parts.
  std::map<std::pair<std::uint32_t, std::uint32_t>, FieldElement>
      pairwise_seeds_;                              // keyed by (i, j), i < j
  std::map<std::uint32_t, FieldElement> self_seeds_;
  std::map<std::pair<std::uint32_t, std::uint32_t>, std::vector<Share>>
      pairwise_seed_shares_;
  std::map<std::uint32_t, std::vector<Share>> self_seed_shares_;
};

// Expands a seed into `dim` field elements with a keyed counter-mode hash
// stream. Both endpoints of a pair derive the identical mask.
std::vector<FieldElement> expand_mask(FieldElement seed, std::size_t dim);

// Drives one full aggregation: every client submits, `drop_after_masking`
// then fail, survivors reveal shares, the server unmasks. Inputs are
// indexed by client id 1..n.
std::vector<double> simulate_round(
    SecAggSession& session, const std::vector<std::vector<double>>& inputs,
    const std::set<std::uint32_t>& drop_after_masking);

}  // namespace fedbench

#endif  // FEDBENCH_SECAGG_HPP_
