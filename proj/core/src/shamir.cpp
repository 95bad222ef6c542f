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

#include "fedbench/shamir.hpp"

#include <set>
#include <string>

#include "fedbench/error.hpp"

namespace fedbench {

SharingParams::SharingParams(std::uint32_t t, std::uint32_t n)
    : threshold(t), total(n) {
  if (t < 1 || t > n) {
    throw ValidationError("sharing params require 1 <= threshold <= total");
  }
  if (static_cast<std::uint64_t>(n) >= kFieldPrime) {
    throw ValidationError("sharing params require total < field modulus");
  }
}

std::vector<Share> share_secret(FieldElement secret,
                                const SharingParams& params,
                                DeterministicStream& stream) {
  std::vector<FieldElement> coeffs;
  coeffs.reserve(params.threshold);
  coeffs.push_back(secret);
  for (std::uint32_t i = 1; i < params.threshold; ++i) {
    coeffs.push_back(random_field_element(stream));
  }
  std::vector<Share> shares;
  shares.reserve(params.total);
  for (std::uint32_t i = 1; i <= params.total; ++i) {
    FieldElement x{i};
    // Horner evaluation of the sharing polynomial at x.
    FieldElement y = coeffs.back();
    for (auto it = coeffs.rbegin() + 1; it != coeffs.rend(); ++it) {
      y = field_mul(y, x) + *it;
    }
    shares.push_back({x, y});
  }
  return shares;
}

FieldElement reconstruct_secret(std::span<const Share> shares,
                                const SharingParams& params) {
  if (shares.size() < params.threshold) {
    throw ProtocolError("reconstruct: got " + std::to_string(shares.size()) +
                        " shares, need at least " +
                        std::to_string(params.threshold));
  }
  std::set<std::uint64_t> xs;
  for (const Share& s : shares) {
    if (s.x.value == 0) throw ProtocolError("reconstruct: share with x = 0");
    if (!xs.insert(s.x.value).second) {
      throw ProtocolError("reconstruct: duplicate evaluation point x = " +
                          std::to_string(s.x.value));
    }
  }
  // Lagrange basis at zero: l_j(0) = prod_{m != j} x_m / (x_m - x_j).
  FieldElement secret{0};
  for (std::size_t j = 0; j < shares.size(); ++j) {
    FieldElement num{1};
    FieldElement den{1};
    for (std::size_t m = 0; m < shares.size(); ++m) {
      if (m == j) continue;
      num = field_mul(num, shares[m].x);
      den = field_mul(den, field_sub(shares[m].x, shares[j].x));
    }
    FieldElement coeff = field_mul(num, field_inv(den));
    secret = secret + field_mul(coeff, shares[j].y);
  }
  return secret;
}

std::vector<Share> add_shares(std::span<const Share> a,
                              std::span<const Share> b) {
  if (a.size() != b.size()) {
    throw ProtocolError("add_shares: share lists differ in length");
  }
  std::vector<Share> out;
  out.reserve(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!(a[i].x == b[i].x)) {
      throw ProtocolError("add_shares: mismatched evaluation points");
    }
    out.push_back({a[i].x, a[i].y + b[i].y});
  }
  return out;
}

}  // namespace fedbench
