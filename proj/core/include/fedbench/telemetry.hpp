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

#ifndef FEDBENCH_TELEMETRY_HPP_
#define FEDBENCH_TELEMETRY_HPP_

#include <chrono>
#include <cstdint>
#include <map>
#include <mutex>
#include <string>

namespace fedbench {

// Declared power model standing in for hardware counters: a device draws
// `watts` at `utilization` whenever it is busy.
struct PowerProfile {
  std::string device = "default-cpu";
  double watts = 70.0;
  double utilization = 1.0;

  void validate() const;
};

// E = P * t, in kWh.
double estimate_energy_kwh(double wall_seconds, const PowerProfile& profile);

// Energy times grid carbon intensity (kg CO2 per kWh).
double estimate_co2_kg(double energy_kwh, double carbon_intensity_kg_per_kwh);

// Ratio of run time to baseline time; summaries report it to one decimal.
double overhead_factor(double run_seconds, double baseline_seconds);

// Best-effort peak RSS of this process (VmHWM), 0 when unavailable.
std::uint64_t peak_rss_bytes();

// Accumulates wall time per label. Span reporting is serialized, so
// concurrent tasks may time themselves against one collector.
class TelemetryCollector {
 public:
  class Span {
   public:
    Span(TelemetryCollector& collector, std::string label);
    ~Span();
    Span(const Span&) = delete;
    Span& operator=(const Span&) = delete;

    double elapsed_seconds() const;

   private:
    TelemetryCollector& collector_;
    std::string label_;
    std::chrono::steady_clock::time_point start_;
  };

  Span span(std::string label) { return Span(*this, std::move(label)); }
  void add(const std::string& label, double seconds);
  double total_seconds(const std::string& label) const;
  std::map<std::string, double> totals() const;

 private:
  mutable std::mutex mutex_;
  std::map<std::string, double> totals_;
};

// Final resource summary of one run.
struct RunTelemetry {
  double wall_seconds = 0.0;       // total
  double training_seconds = 0.0;   // "train" span
  std::uint64_t peak_rss = 0;
  double energy_kwh = 0.0;
  double co2_kg = 0.0;
  std::map<std::string, double> phase_seconds;
};

}  // namespace fedbench

#endif  // FEDBENCH_TELEMETRY_HPP_
