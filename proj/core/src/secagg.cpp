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

#include "fedbench/secagg.hpp"

#include <algorithm>
#include <string>

#include "fedbench/error.hpp"

namespace fedbench {

std::vector<FieldElement> expand_mask(FieldElement seed, std::size_t dim) {
  DeterministicStream prg(seed.value, "secagg/prg");
  std::vector<FieldElement> mask;
  mask.reserve(dim);
  for (std::size_t i = 0; i < dim; ++i) {
    mask.push_back(random_field_element(prg));
  }
  return mask;
}

SecAggSession::SecAggSession(const SecAggConfig& config,
                             const FixedPointCodec& codec)
    : config_(config),
      codec_(codec),
      sharing_(config.threshold, config.num_clients) {}

SecAggSession SecAggSession::setup(const SecAggConfig& config,
                                   const FixedPointCodec& codec,
                                   DeterministicStream& stream) {
  if (config.num_clients < 1) {
    throw ValidationError("secagg: need at least one client");
  }
  if (config.threshold < 1 || config.threshold > config.num_clients) {
    throw ValidationError("secagg: threshold must be in [1, num_clients]");
  }
  if (config.dim < 1) throw ValidationError("secagg: dim must be >= 1");
  if (config.num_clients > codec.max_addends()) {
    throw ValidationError("secagg: num_clients exceeds codec max_addends");
  }

  SecAggSession session(config, codec);
  const std::uint32_t n = config.num_clients;
  for (std::uint32_t i = 1; i <= n; ++i) {
    for (std::uint32_t j = i + 1; j <= n; ++j) {
      FieldElement seed = random_field_element(stream);
      session.pairwise_seeds_[{i, j}] = seed;
      session.pairwise_seed_shares_[{i, j}] =
          share_secret(seed, session.sharing_, stream);
    }
  }
  for (std::uint32_t i = 1; i <= n; ++i) {
    FieldElement seed = random_field_element(stream);
    session.self_seeds_[i] = seed;
    session.self_seed_shares_[i] =
        share_secret(seed, session.sharing_, stream);
  }
  session.round_ = SecAggRound::MaskedInput;
  return session;
}

MaskedVector SecAggSession::mask_input(std::uint32_t client,
                                       std::span<const double> values) {
  if (round_ != SecAggRound::MaskedInput) {
    throw ProtocolError("mask_input: session is not in the masked-input round");
  }
  if (client < 1 || client > config_.num_clients) {
    throw ProtocolError("mask_input: unknown client " + std::to_string(client));
  }
  if (values.size() != config_.dim) {
    throw ProtocolError("mask_input: vector length " +
                        std::to_string(values.size()) + " != session dim " +
                        std::to_string(config_.dim));
  }
  if (!submitted_.insert(client).second) {
    throw ProtocolError("mask_input: duplicate submission from client " +
                        std::to_string(client));
  }

  MaskedVector msg;
  msg.sender = client;
  msg.payload.resize(config_.dim);
  for (std::size_t k = 0; k < config_.dim; ++k) {
    msg.payload[k] = codec_.quantize(values[k]);
  }
  // Pairwise masks: the lower-indexed endpoint adds, the higher subtracts,
  // so the pair cancels in the aggregate.
  for (std::uint32_t other = 1; other <= config_.num_clients; ++other) {
    if (other == client) continue;
    const auto key = std::minmax(client, other);
    const auto mask =
        expand_mask(pairwise_seeds_.at({key.first, key.second}), config_.dim);
    if (client < other) {
      for (std::size_t k = 0; k < config_.dim; ++k) {
        msg.payload[k] = msg.payload[k] + mask[k];
      }
    } else {
      for (std::size_t k = 0; k < config_.dim; ++k) {
        msg.payload[k] = msg.payload[k] - mask[k];
      }
    }
  }
  const auto self_mask = expand_mask(self_seeds_.at(client), config_.dim);
  for (std::size_t k = 0; k < config_.dim; ++k) {
    msg.payload[k] = msg.payload[k] + self_mask[k];
  }
  return msg;
}

void SecAggSession::begin_unmasking(const std::set<std::uint32_t>& survivors) {
  if (round_ != SecAggRound::MaskedInput) {
    throw ProtocolError("begin_unmasking: wrong round");
  }
  for (std::uint32_t c : survivors) {
    if (c < 1 || c > config_.num_clients) {
      throw ProtocolError("begin_unmasking: unknown survivor " +
                          std::to_string(c));
    }
  }
  if (survivors.size() < config_.threshold) {
    throw SessionAbortError(
        "session abort: " + std::to_string(survivors.size()) +
        " survivors, threshold " + std::to_string(config_.threshold));
  }
  survivors_ = survivors;
  round_ = SecAggRound::Unmasking;
}

RevealedShares SecAggSession::collect_revealed_shares() const {
  if (round_ != SecAggRound::Unmasking) {
    throw ProtocolError("collect_revealed_shares: wrong round");
  }
  RevealedShares revealed;
  // Shares held by the first `threshold` surviving clients; holder ids are
  // the Shamir evaluation points.
  std::vector<std::uint32_t> holders(survivors_.begin(), survivors_.end());
  holders.resize(config_.threshold);
  auto pick = [&](const std::vector<Share>& all) {
    std::vector<Share> subset;
    for (std::uint32_t h : holders) subset.push_back(all[h - 1]);
    return subset;
  };
  for (std::uint32_t c = 1; c <= config_.num_clients; ++c) {
    if (survivors_.contains(c)) {
      revealed.self_mask[c] = pick(self_seed_shares_.at(c));
    } else {
      for (std::uint32_t other = 1; other <= config_.num_clients; ++other) {
        if (other == c) continue;
        const auto key = std::minmax(c, other);
        revealed.pairwise[{key.first, key.second}] =
            pick(pairwise_seed_shares_.at({key.first, key.second}));
      }
    }
  }
  return revealed;
}

std::vector<double> SecAggSession::unmask(
    const std::vector<MaskedVector>& messages, const RevealedShares& revealed) {
  if (round_ != SecAggRound::Unmasking) {
    throw ProtocolError("unmask: wrong round");
  }
  if (survivors_.size() < config_.threshold) {
    throw SessionAbortError("unmask: survivor set below threshold");
  }

  // Mask-leak hazard: a client whose self-mask seed and any pairwise seed
  // are both revealed could have its individual input reconstructed.
  for (const auto& [pair, shares] : revealed.pairwise) {
    (void)shares;
    if (revealed.self_mask.contains(pair.first) ||
        revealed.self_mask.contains(pair.second)) {
      throw ProtocolError(
          "unmask: both self-mask and pairwise shares revealed for client " +
          std::to_string(revealed.self_mask.contains(pair.first)
                             ? pair.first
                             : pair.second));
    }
  }

  std::set<std::uint32_t> senders;
  for (const MaskedVector& msg : messages) {
    if (!survivors_.contains(msg.sender)) {
      throw ProtocolError("unmask: message from non-survivor " +
                          std::to_string(msg.sender));
    }
    if (msg.payload.size() != config_.dim) {
      throw ProtocolError("unmask: malformed payload");
    }
    if (!senders.insert(msg.sender).second) {
      throw ProtocolError("unmask: duplicate message from client " +
                          std::to_string(msg.sender));
    }
  }
  if (senders != survivors_) {
    throw ProtocolError("unmask: need exactly one message per survivor");
  }

  std::vector<FieldElement> sum(config_.dim, FieldElement{0});
  for (const MaskedVector& msg : messages) {
    for (std::size_t k = 0; k < config_.dim; ++k) {
      sum[k] = sum[k] + msg.payload[k];
    }
  }

  // Remove survivors' self masks.
  for (std::uint32_t c : survivors_) {
    auto it = revealed.self_mask.find(c);
    if (it == revealed.self_mask.end() ||
        it->second.size() < config_.threshold) {
      throw ProtocolError("unmask: missing self-mask shares for survivor " +
                          std::to_string(c));
    }
    FieldElement seed = reconstruct_secret(it->second, sharing_);
    const auto mask = expand_mask(seed, config_.dim);
    for (std::size_t k = 0; k < config_.dim; ++k) {
      sum[k] = sum[k] - mask[k];
    }
  }

  // Remove pairwise masks the survivors included for each dropout.
  for (std::uint32_t dropped = 1; dropped <= config_.num_clients; ++dropped) {
    if (survivors_.contains(dropped)) continue;
    for (std::uint32_t c : survivors_) {
      const auto key = std::minmax(c, dropped);
      auto it = revealed.pairwise.find({key.first, key.second});
      if (it == revealed.pairwise.end() ||
          it->second.size() < config_.threshold) {
        throw ProtocolError("unmask: missing pairwise shares for dropout " +
                            std::to_string(dropped));
      }
      FieldElement seed = reconstruct_secret(it->second, sharing_);
      const auto mask = expand_mask(seed, config_.dim);
      if (c < dropped) {
        for (std::size_t k = 0; k < config_.dim; ++k) {
          sum[k] = sum[k] - mask[k];
        }
      } else {
        for (std::size_t k = 0; k < config_.dim; ++k) {
          sum[k] = sum[k] + mask[k];
        }
      }
    }
  }

  std::vector<double> result(config_.dim);
  for (std::size_t k = 0; k < config_.dim; ++k) {
    result[k] = codec_.dequantize_sum(sum[k], survivors_.size());
  }
  round_ = SecAggRound::Done;
  return result;
}

std::vector<double> simulate_round(
    SecAggSession& session, const std::vector<std::vector<double>>& inputs,
    const std::set<std::uint32_t>& drop_after_masking) {
  const std::uint32_t n = session.config().num_clients;
  if (inputs.size() != n) {
    throw ValidationError("simulate_round: need one input vector per client");
  }
  std::vector<MaskedVector> messages;
  for (std::uint32_t c = 1; c <= n; ++c) {
    messages.push_back(session.mask_input(c, inputs[c - 1]));
  }
  std::set<std::uint32_t> survivors;
  for (std::uint32_t c = 1; c <= n; ++c) {
    if (!drop_after_masking.contains(c)) survivors.insert(c);
  }
  session.begin_unmasking(survivors);
  std::vector<MaskedVector> delivered;
  for (const MaskedVector& msg : messages) {
    if (survivors.contains(msg.sender)) delivered.push_back(msg);
  }
  return session.unmask(delivered, session.collect_revealed_shares());
}

}  // namespace fedbench
