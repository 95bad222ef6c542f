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

#ifndef FEDBENCH_SHAMIR_HPP_
#define FEDBENCH_SHAMIR_HPP_

#include <span>
#include <vector>

#include "fedbench/field.hpp"
#include "fedbench/rng.hpp"

namespace fedbench {

// One evaluation (x, f(x)) of the sharing polynomial. x is never zero and
// is unique within a sharing.
struct Share {
  FieldElement x;
  FieldElement y;

  friend bool operator==(const Share&, const Share&) = default;
};

// (t, n)-threshold parameters: any t shares reconstruct, fewer reveal
// nothing.
struct SharingParams {
  std::uint32_t threshold = 0;
  std::uint32_t total = 0;

  SharingParams(std::uint32_t t, std::uint32_t n);
};

// Splits `secret` into params.total shares: evaluations at x = 1..n of a
// degree-(t-1) polynomial with constant term `secret` and uniformly random
// higher coefficients drawn from `stream`.
std::vector<Share> share_secret(FieldElement secret, const SharingParams& params,
                                DeterministicStream& stream);

// Lagrange interpolation at x = 0 over all provided shares. Requires at
// least params.threshold shares with pairwise distinct x; any consistent
// superset of size >= t yields the same secret.
FieldElement reconstruct_secret(std::span<const Share> shares,
                                const SharingParams& params);

// Pointwise share addition. Inputs must be aligned: same length and the
// same x at every position. Reconstructs to the sum of the two secrets.
std::vector<Share> add_shares(std::span<const Share> a,
                              std::span<const Share> b);

}  // namespace fedbench

#endif  // FEDBENCH_SHAMIR_HPP_
