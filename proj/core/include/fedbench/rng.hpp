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

#ifndef FEDBENCH_RNG_HPP_
#define FEDBENCH_RNG_HPP_

#include <array>
#include <cstdint>
#include <string>
#include <string_view>

namespace fedbench {

// Deterministic named random stream.
//
// Every source of randomness in a run is a stream keyed by the experiment's
// master seed and a hierarchical name such as "client/2/round/3/shuffle".
// The same (seed, name) pair always produces the same byte stream; distinct
// names produce independent streams. Bytes come from SHA-256 in counter
// mode over a key derived from (seed, name), so streams are reproducible
// across processes and insensitive to execution order.
class DeterministicStream {
 public:
  DeterministicStream(std::uint64_t seed, std::string_view name);

  std::uint64_t next_u64();

  // Uniform in [0, 1), 53-bit resolution.
  double uniform();

  // Uniform in (0, 1]; never zero, usable under log().
  double uniform_open();

  // Standard normal via Box-Muller. Draws two uniforms per pair and caches
  // the second value, so the sequence is a pure function of the stream.
  double gaussian();

  // Uniform integer in [0, bound) by rejection; bound must be nonzero.
  std::uint64_t uniform_below(std::uint64_t bound);

  // Gamma(alpha, 1), alpha > 0.  Marsaglia-Tsang squeeze for alpha >= 1,
  // boosted by U^(1/alpha) below 1.
  double gamma(double alpha);

  const std::string& name() const { return name_; }
  std::uint64_t seed() const { return seed_; }

 private:
  void refill();

  std::uint64_t seed_;
  std::string name_;
  std::array<std::uint8_t, 32> key_;
  std::uint64_t block_counter_ = 0;
  std::array<std::uint64_t, 4> buffer_{};
  int buffer_pos_ = 4;  // empty until first refill
  bool have_cached_gaussian_ = false;
  double cached_gaussian_ = 0.0;
};

// Stream factory; the canonical way modules obtain their randomness.
DeterministicStream derive_stream(std::uint64_t seed, std::string_view name);

// SHA-256 of arbitrary bytes, hex-encoded. Used for stream keying and for
// config/result hashing.
std::string sha256_hex(std::string_view bytes);

}  // namespace fedbench

#endif  // FEDBENCH_RNG_HPP_
