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

#ifndef FEDBENCH_FIELD_HPP_
#define FEDBENCH_FIELD_HPP_

#include <cstdint>

#include "fedbench/error.hpp"
#include "fedbench/rng.hpp"

namespace fedbench {

// Prime modulus 2^61 - 1 (Mersenne).
inline constexpr std::uint64_t kFieldPrime = (std::uint64_t{1} << 61) - 1;

// Element of GF(2^61 - 1). Value is always reduced to [0, p).
struct FieldElement {
  std::uint64_t value = 0;

  constexpr FieldElement() = default;
  constexpr explicit FieldElement(std::uint64_t v) : value(v % kFieldPrime) {}

  friend constexpr bool operator==(FieldElement a, FieldElement b) {
    return a.value == b.value;
  }
};

constexpr FieldElement field_add(FieldElement a, FieldElement b) {
  std::uint64_t s = a.value + b.value;  // < 2^62, no overflow
  if (s >= kFieldPrime) s -= kFieldPrime;
  FieldElement r;
  r.value = s;
  return r;
}

constexpr FieldElement field_neg(FieldElement a) {
  FieldElement r;
  r.value = a.value == 0 ? 0 : kFieldPrime - a.value;
  return r;
}

constexpr FieldElement field_sub(FieldElement a, FieldElement b) {
  return field_add(a, field_neg(b));
}

constexpr FieldElement field_mul(FieldElement a, FieldElement b) {
  unsigned __int128 prod =
      static_cast<unsigned __int128>(a.value) * b.value;  // < 2^122
  // Mersenne fold: x mod (2^61 - 1) = (x & p) + (x >> 61), applied twice.
  std::uint64_t lo = static_cast<std::uint64_t>(prod) & kFieldPrime;
  std::uint64_t hi = static_cast<std::uint64_t>(prod >> 61);
  std::uint64_t s = lo + (hi & kFieldPrime) + (hi >> 61);
  s = (s & kFieldPrime) + (s >> 61);
  if (s >= kFieldPrime) s -= kFieldPrime;
  FieldElement r;
  r.value = s;
  return r;
}

constexpr FieldElement operator+(FieldElement a, FieldElement b) {
  return field_add(a, b);
}
constexpr FieldElement operator-(FieldElement a, FieldElement b) {
  return field_sub(a, b);
}
constexpr FieldElement operator*(FieldElement a, FieldElement b) {
  return field_mul(a, b);
}

constexpr FieldElement field_pow(FieldElement base, std::uint64_t exp) {
  FieldElement acc;
  acc.value = 1;
  FieldElement sq = base;
  while (exp != 0) {
    if (exp & 1) acc = field_mul(acc, sq);
    sq = field_mul(sq, sq);
    exp >>= 1;
  }
  return acc;
}

// Multiplicative inverse via Fermat: a^(p-2). Inverting zero is a domain
// error.
inline FieldElement field_inv(FieldElement a) {
  if (a.value == 0) throw DomainError("field_inv: zero has no inverse");
  return field_pow(a, kFieldPrime - 2);
}

// Uniform field element; rejection keeps the draw unbiased (only the single
// 61-bit pattern equal to p is ever rejected).
inline FieldElement random_field_element(DeterministicStream& stream) {
  for (;;) {
    std::uint64_t candidate = stream.next_u64() & kFieldPrime;
    if (candidate < kFieldPrime) {
      FieldElement r;
      r.value = candidate;
      return r;
    }
  }
}

// Fixed-point codec mapping reals in [-clip_range, clip_range] onto
// [0, 2^bits - 1] so that field sums of encodings recover real sums.
//
// Encoding is offset-based: q(x) = round((clamp(x) + r) / step). Sums of
// up to max_addends encodings stay below p, so aggregation never wraps.
class FixedPointCodec {
 public:
  FixedPointCodec(double clip_range, int bits);

  double clip_range() const { return clip_range_; }
  int bits() const { return bits_; }
  double step() const { return step_; }
  std::uint64_t max_addends() const { return max_addends_; }

  FieldElement quantize(double x) const;

  // Inverse of quantize for a single value.
  double dequantize(FieldElement q) const;

  // Recovers sum_i clamp(x_i) from the field sum of `count` encodings.
  // Error is bounded by count * step / 2. Throws if count exceeds
  // max_addends (the no-wrap guarantee would be void).
  double dequantize_sum(FieldElement sum, std::uint64_t count) const;

 private:
  double clip_range_;
  int bits_;
  double step_;
  std::uint64_t max_addends_;
};

}  // namespace fedbench

#endif  // FEDBENCH_FIELD_HPP_
