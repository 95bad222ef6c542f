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

#include "fedbench/field.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace fedbench {

FixedPointCodec::FixedPointCodec(double clip_range, int bits)
    : clip_range_(clip_range), bits_(bits) {
  if (!(clip_range > 0.0) || !std::isfinite(clip_range)) {
    throw ValidationError("codec clip_range must be a positive finite real");
  }
  if (bits < 1 || bits > 59) {
    throw ValidationError("codec bits must be in [1, 59]");
  }
  step_ = 2.0 * clip_range_ /
          static_cast<double>((std::uint64_t{1} << bits_) - 1);
  // bits + log2(max_addends) = 60 < 61, so count * (2^bits - 1) < p.
  max_addends_ = std::uint64_t{1} << (60 - bits_);
}

FieldElement FixedPointCodec::quantize(double x) const {
  const double clamped = std::clamp(x, -clip_range_, clip_range_);
  const std::uint64_t levels = (std::uint64_t{1} << bits_) - 1;
  auto q = static_cast<std::int64_t>(std::llround((clamped + clip_range_) / step_));
  q = std::clamp<std::int64_t>(q, 0, static_cast<std::int64_t>(levels));
  FieldElement r;
  r.value = static_cast<std::uint64_t>(q);
  return r;
}

double FixedPointCodec::dequantize(FieldElement q) const {
  return static_cast<double>(q.value) * step_ - clip_range_;
}

double FixedPointCodec::dequantize_sum(FieldElement sum,
                                       std::uint64_t count) const {
  if (count > max_addends_) {
    throw DomainError("dequantize_sum: count " + std::to_string(count) +
                      " exceeds max_addends " + std::to_string(max_addends_));
  }
  return static_cast<double>(sum.value) * step_ -
         static_cast<double>(count) * clip_range_;
}

}  // namespace fedbench
