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

#include "fedbench/rng.hpp"

#include <openssl/evp.h>

#include <cmath>
#include <cstring>
#include <numbers>
#include <stdexcept>

#include "fedbench/error.hpp"

namespace fedbench {
namespace {

void sha256(const std::uint8_t* data, std::size_t len, std::uint8_t out[32]) {
  // One context per thread; EVP_DigestInit_ex resets it for each message.
  thread_local EVP_MD_CTX* ctx = EVP_MD_CTX_new();
  unsigned int out_len = 32;
  if (EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr) != 1 ||
      EVP_DigestUpdate(ctx, data, len) != 1 ||
      EVP_DigestFinal_ex(ctx, out, &out_len) != 1) {
    throw Error("SHA-256 digest failed");
  }
}

void put_le64(std::uint8_t* out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out[i] = static_cast<std::uint8_t>(v >> (8 * i));
}

}  // namespace

DeterministicStream::DeterministicStream(std::uint64_t seed,
                                         std::string_view name)
    : seed_(seed), name_(name) {
  if (name.empty()) throw ValidationError("stream name must be nonempty");
  // key = SHA-256(seed_le64 || 0x1f || name)
  std::string material;
  material.resize(9 + name.size());
  put_le64(reinterpret_cast<std::uint8_t*>(material.data()), seed);
  material[8] = '\x1f';
  std::memcpy(material.data() + 9, name.data(), name.size());
  sha256(reinterpret_cast<const std::uint8_t*>(material.data()),
         material.size(), key_.data());
}

void DeterministicStream::refill() {
  std::uint8_t block_input[40];
  std::memcpy(block_input, key_.data(), 32);
  put_le64(block_input + 32, block_counter_++);
  std::uint8_t digest[32];
  sha256(block_input, sizeof(block_input), digest);
  for (int i = 0; i < 4; ++i) {
    std::uint64_t w = 0;
    for (int b = 7; b >= 0; --b) w = (w << 8) | digest[8 * i + b];
    buffer_[i] = w;
  }
  buffer_pos_ = 0;
}

std::uint64_t DeterministicStream::next_u64() {
  if (buffer_pos_ >= 4) refill();
  return buffer_[buffer_pos_++];
}

double DeterministicStream::uniform() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double DeterministicStream::uniform_open() {
  return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
}

double DeterministicStream::gaussian() {
  if (have_cached_gaussian_) {
    have_cached_gaussian_ = false;
    return cached_gaussian_;
  }
  const double u1 = uniform_open();
  const double u2 = uniform();
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  cached_gaussian_ = radius * std::sin(angle);
  have_cached_gaussian_ = true;
  return radius * std::cos(angle);
}

std::uint64_t DeterministicStream::uniform_below(std::uint64_t bound) {
  if (bound == 0) throw DomainError("uniform_below: bound must be nonzero");
  // Rejection on the top of the range to avoid modulo bias.
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
  std::uint64_t draw;
  do {
    draw = next_u64();
  } while (draw >= limit);
  return draw % bound;
}

double DeterministicStream::gamma(double alpha) {
  if (!(alpha > 0.0)) throw DomainError("gamma: alpha must be positive");
  if (alpha < 1.0) {
    const double boost = std::pow(uniform_open(), 1.0 / alpha);
    return gamma(alpha + 1.0) * boost;
  }
  const double d = alpha - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x;
    double v;
    do {
      x = gaussian();
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = uniform_open();
    if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
    if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
  }
}

DeterministicStream derive_stream(std::uint64_t seed, std::string_view name) {
  return DeterministicStream(seed, name);
}

std::string sha256_hex(std::string_view bytes) {
  std::uint8_t digest[32];
  sha256(reinterpret_cast<const std::uint8_t*>(bytes.data()), bytes.size(),
         digest);
  static const char* kHex = "0123456789abcdef";
  std::string out;
  out.reserve(64);
  for (std::uint8_t b : digest) {
    out.push_back(kHex[b >> 4]);
    out.push_back(kHex[b & 0xf]);
  }
  return out;
}

}  // namespace fedbench
