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

#include <fstream>
#include <sstream>

#include "fedbench/error.hpp"

namespace fedbench {

void PowerProfile::validate() const {
  if (watts < 0) throw ValidationError("power profile: watts must be >= 0");
  if (utilization < 0 || utilization > 1) {
    throw ValidationError("power profile: utilization must be in [0, 1]");
  }
}

double estimate_energy_kwh(double wall_seconds, const PowerProfile& profile) {
  if (wall_seconds < 0) throw ValidationError("energy: negative duration");
  profile.validate();
  return profile.watts * profile.utilization * wall_seconds / 3.6e6;
}

double estimate_co2_kg(double energy_kwh, double carbon_intensity_kg_per_kwh) {
  if (energy_kwh < 0 || carbon_intensity_kg_per_kwh < 0) {
    throw ValidationError("co2: inputs must be >= 0");
  }
  return energy_kwh * carbon_intensity_kg_per_kwh;
}

double overhead_factor(double run_seconds, double baseline_seconds) {
  if (!(baseline_seconds > 0)) {
    throw DomainError("overhead_factor: baseline must be > 0");
  }
  return run_seconds / baseline_seconds;
}

std::uint64_t peak_rss_bytes() {
  // VmHWM is the kernel-tracked high-water mark; reading it once at the end
  // of a run captures the true peak without polling.
  std::ifstream status("/proc/self/status");
  std::string line;
  while (std::getline(status, line)) {
    if (line.rfind("VmHWM:", 0) == 0) {
      std::istringstream ss(line.substr(6));
      std::uint64_t kb = 0;
      ss >> kb;
      return kb * 1024;
    }
  }
  return 0;
}

TelemetryCollector::Span::Span(TelemetryCollector& collector, std::string label)
    : collector_(collector),
      label_(std::move(label)),
      start_(std::chrono::steady_clock::now()) {}

double TelemetryCollector::Span::elapsed_seconds() const {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                       start_)
      .count();
}

TelemetryCollector::Span::~Span() { collector_.add(label_, elapsed_seconds()); }

void TelemetryCollector::add(const std::string& label, double seconds) {
  std::lock_guard<std::mutex> lock(mutex_);
  totals_[label] += seconds;
}

double TelemetryCollector::total_seconds(const std::string& label) const {
  std::lock_guard<std::mutex> lock(mutex_);
  auto it = totals_.find(label);
  return it == totals_.end() ? 0.0 : it->second;
}

std::map<std::string, double> TelemetryCollector::totals() const {
  std::lock_guard<std::mutex> lock(mutex_);
  return totals_;
}

}  // namespace fedbench
