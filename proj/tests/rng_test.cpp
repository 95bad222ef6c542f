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

#include <doctest.h>

#include <cmath>
#include <set>
#include <string>
#include <vector>

#include "fedbench/error.hpp"

using fedbench::DeterministicStream;
using fedbench::derive_stream;

TEST_CASE("same seed and name reproduce the stream") {
  DeterministicStream a(42, "client/2/round/3/shuffle");
  DeterministicStream b(42, "client/2/round/3/shuffle");
  for (int i = 0; i < 64; ++i) CHECK(a.next_u64() == b.next_u64());
}

TEST_CASE("distinct names give distinct streams") {
  DeterministicStream a(42, "a");
  DeterministicStream b(42, "b");
  bool any_diff = false;
  for (int i = 0; i < 8; ++i) any_diff |= a.next_u64() != b.next_u64();
  CHECK(any_diff);
}

TEST_CASE("distinct seeds give distinct streams") {
  DeterministicStream a(1, "x");
  DeterministicStream b(2, "x");
  CHECK(a.next_u64() != b.next_u64());
}

TEST_CASE("no 16-byte prefix collisions across 1000 names") {
  std::set<std::pair<std::uint64_t, std::uint64_t>> prefixes;
  for (int i = 0; i < 1000; ++i) {
    DeterministicStream s(7, "name/" + std::to_string(i));
    prefixes.insert({s.next_u64(), s.next_u64()});
  }
  CHECK(prefixes.size() == 1000);
}

TEST_CASE("empty stream name is rejected") {
  CHECK_THROWS_AS(DeterministicStream(1, ""), fedbench::ValidationError);
}

TEST_CASE("uniform stays in [0,1) and uniform_open in (0,1]") {
  DeterministicStream s(3, "uniforms");
  for (int i = 0; i < 10000; ++i) {
    const double u = s.uniform();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
    const double v = s.uniform_open();
    CHECK(v > 0.0);
    CHECK(v <= 1.0);
  }
}

TEST_CASE("gaussian moments match the standard normal") {
  DeterministicStream s(11, "gauss");
  const int n = 200000;
  double sum = 0.0;
  double sum_sq = 0.0;
  for (int i = 0; i < n; ++i) {
    const double g = s.gaussian();
    sum += g;
    sum_sq += g * g;
  }
  const double mean = sum / n;
  const double var = sum_sq / n - mean * mean;
  CHECK(std::abs(mean) < 0.01);
  CHECK(std::abs(var - 1.0) < 0.02);
}

TEST_CASE("uniform_below respects the bound and rejects zero") {
  DeterministicStream s(5, "bounded");
  for (int i = 0; i < 1000; ++i) CHECK(s.uniform_below(7) < 7);
  CHECK_THROWS_AS(s.uniform_below(0), fedbench::DomainError);
}

TEST_CASE("gamma mean and variance match alpha") {
  for (double alpha : {0.1, 0.5, 1.0, 4.0}) {
    DeterministicStream s(13, "gamma/" + std::to_string(alpha));
    const int n = 200000;
    double sum = 0.0;
    double sum_sq = 0.0;
    for (int i = 0; i < n; ++i) {
      const double g = s.gamma(alpha);
      CHECK(g >= 0.0);
      sum += g;
      sum_sq += g * g;
    }
    const double mean = sum / n;
    const double var = sum_sq / n - mean * mean;
    // Gamma(alpha, 1): mean = alpha, var = alpha.
    CHECK(mean == doctest::Approx(alpha).epsilon(0.05));
    CHECK(var == doctest::Approx(alpha).epsilon(0.10));
  }
}

TEST_CASE("derive_stream matches direct construction") {
  DeterministicStream direct(9, "abc");
  DeterministicStream derived = derive_stream(9, "abc");
  CHECK(direct.next_u64() == derived.next_u64());
}

TEST_CASE("sha256_hex matches a known vector") {
  // SHA-256("abc"), FIPS 180-2 appendix.
  CHECK(fedbench::sha256_hex("abc") ==
        "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  CHECK(fedbench::sha256_hex("") ==
        "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
}
