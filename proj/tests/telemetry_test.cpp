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

#include "fedbench/telemetry.hpp"

#include <doctest.h>

#include <chrono>
#include <cmath>
#include <thread>

#include "fedbench/error.hpp"
#include "fedbench/rng.hpp"

using fedbench::PowerProfile;
using fedbench::TelemetryCollector;

TEST_CASE("span accounting: empty, timed, nested") {
  TelemetryCollector collector;
  { auto span = collector.span("empty"); }
  CHECK(collector.total_seconds("empty") < 0.01);

  {
    auto parent = collector.span("parent");
    {
      auto child = collector.span("child");
      std::this_thread::sleep_for(std::chrono::milliseconds(100));
    }
  }
  const double child = collector.total_seconds("child");
  const double parent = collector.total_seconds("parent");
  CHECK(child == doctest::Approx(0.1).epsilon(0.5));
  CHECK(parent >= child);
}

TEST_CASE("energy model unit conversion") {
  PowerProfile profile{"gpu", 100.0, 1.0};
  CHECK(fedbench::estimate_energy_kwh(3600.0, profile) == 0.1);
  profile.utilization = 0.0;
  CHECK(fedbench::estimate_energy_kwh(3600.0, profile) == 0.0);
}

TEST_CASE("energy matches the closed form on a random grid") {
  fedbench::DeterministicStream stream(150, "telemetry/grid");
  for (int i = 0; i < 200; ++i) {
    const double watts = stream.uniform() * 500.0;
    const double util = stream.uniform();
    const double seconds = stream.uniform() * 1e5;
    PowerProfile profile{"x", watts, util};
    const double expected = watts * util * seconds / 3.6e6;
    CHECK(std::abs(fedbench::estimate_energy_kwh(seconds, profile) -
                   expected) <= 1e-12);
  }
}

TEST_CASE("co2 is the product of energy and intensity") {
  CHECK(fedbench::estimate_co2_kg(0.1, 0.4) == doctest::Approx(0.04));
  CHECK(fedbench::estimate_co2_kg(0.0, 0.4) == 0.0);
  CHECK(fedbench::estimate_co2_kg(0.2, 0.8) ==
        doctest::Approx(2 * fedbench::estimate_co2_kg(0.1, 0.8)));
}

TEST_CASE("overhead factor") {
  CHECK(fedbench::overhead_factor(235.6, 9.8) ==
        doctest::Approx(24.0).epsilon(0.005));
  CHECK(fedbench::overhead_factor(2354.6, 2451.6) ==
        doctest::Approx(0.96).epsilon(0.005));
  for (double a : {0.5, 3.0, 1e4}) {
    CHECK(fedbench::overhead_factor(a, a) == 1.0);
  }
  CHECK_THROWS_AS(fedbench::overhead_factor(1.0, 0.0),
                  fedbench::DomainError);
}

TEST_CASE("power profile validation") {
  PowerProfile negative{"x", -1.0, 0.5};
  CHECK_THROWS_AS(negative.validate(), fedbench::ValidationError);
  PowerProfile util{"x", 1.0, 1.5};
  CHECK_THROWS_AS(util.validate(), fedbench::ValidationError);
}

TEST_CASE("peak rss is reported on this platform") {
  CHECK(fedbench::peak_rss_bytes() > 0);
}
