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

#ifndef FEDBENCH_DATA_HPP_
#define FEDBENCH_DATA_HPP_

#include <map>
#include <span>
#include <string>
#include <vector>

#include "fedbench/rng.hpp"

namespace fedbench {

// Dense feature matrix with integer class labels in [0, num_classes).
struct Dataset {
  std::vector<double> features;  // row-major, num_samples x dim
  std::vector<int> labels;
  int dim = 0;
  int num_classes = 0;

  std::size_t size() const { return labels.size(); }
  std::span<const double> row(std::size_t i) const {
    return {features.data() + i * static_cast<std::size_t>(dim),
            static_cast<std::size_t>(dim)};
  }
};

// Gaussian class clusters with unit covariance. Class means are random
// orthogonal directions scaled by `separation` (plain random directions
// when num_classes > dim), so any two means are separation * sqrt(2)
// apart. Class counts differ by at most one.
Dataset generate_blobs(int num_classes, int dim, int num_samples,
                       double separation, DeterministicStream& stream);

// CSV with header "f0,...,f{d-1},label"; numeric cells, non-negative
// integer labels. num_classes = 1 + max label. Errors carry line numbers.
Dataset load_csv(const std::string& path);
void save_csv(const Dataset& data, const std::string& path);

// Disjoint assignment of sample indices to clients covering all of
// `indices`; every client nonempty.
struct Partition {
  std::vector<std::vector<int>> assignments;  // client -> sample indices

  std::size_t num_clients() const { return assignments.size(); }
};

// Class-wise Dirichlet split: for each class, proportions over clients are
// drawn from Dirichlet(alpha) and that class's shuffled samples are dealt
// out accordingly. Draws that leave any client empty are retried (up to
// 100 times). Smaller alpha gives stronger label skew per client.
Partition dirichlet_partition(std::span<const int> labels,
                              std::span<const int> indices, int num_clients,
                              double alpha, DeterministicStream& stream);

struct TrainValSplit {
  std::vector<int> train;
  std::vector<int> val;
  bool stratified = true;  // false when some class had < 2 samples
};

// Stratified split: train gets round(fraction * n) samples, allocated per
// class by largest remainder so class proportions are within one sample of
// ideal. Falls back to an unstratified shuffle (flagged) when any class
// has fewer than 2 samples.
TrainValSplit split_train_val(const Dataset& data, double train_fraction,
                              DeterministicStream& stream);

// Per-client class histogram, e.g. for partition reports.
std::vector<std::vector<int>> class_histograms(const Dataset& data,
                                               const Partition& partition);

}  // namespace fedbench

#endif  // FEDBENCH_DATA_HPP_
