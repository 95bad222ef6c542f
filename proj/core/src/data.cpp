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

#include "fedbench/data.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>

#include "fedbench/error.hpp"

namespace fedbench {
namespace {

double l2(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

// Fisher-Yates driven by the named stream.
void shuffle_indices(std::vector<int>& v, DeterministicStream& stream) {
  for (std::size_t i = v.size(); i > 1; --i) {
    std::size_t j = stream.uniform_below(i);
    std::swap(v[i - 1], v[j]);
  }
}

// Largest-remainder rounding of `total` items into shares proportional to
// `weights`. Deterministic: ties go to the lower index.
std::vector<int> apportion(std::span<const double> weights, int total) {
  const std::size_t n = weights.size();
  double wsum = 0.0;
  for (double w : weights) wsum += w;
  std::vector<int> counts(n, 0);
  std::vector<std::pair<double, std::size_t>> remainders;
  int assigned = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double ideal = wsum > 0 ? weights[i] / wsum * total
                                  : static_cast<double>(total) / n;
    counts[i] = static_cast<int>(std::floor(ideal));
    assigned += counts[i];
    remainders.push_back({ideal - counts[i], i});
  }
  std::sort(remainders.begin(), remainders.end(),
            [](const auto& a, const auto& b) {
              if (a.first != b.first) return a.first > b.first;
              return a.second < b.second;
            });
  for (int k = 0; k < total - assigned; ++k) {
    counts[remainders[k % n].second] += 1;
  }
  return counts;
}

}  // namespace

Dataset generate_blobs(int num_classes, int dim, int num_samples,
                       double separation, DeterministicStream& stream) {
  if (num_classes < 2) throw ValidationError("blobs: num_classes must be >= 2");
  if (dim < 1) throw ValidationError("blobs: dim must be >= 1");
  if (num_samples < num_classes) {
    throw ValidationError("blobs: need at least one sample per class");
  }
  if (separation < 0) throw ValidationError("blobs: separation must be >= 0");

  // Random directions, orthonormalized when possible so pairwise mean
  // distances are exactly separation * sqrt(2).
  std::vector<std::vector<double>> means(num_classes,
                                         std::vector<double>(dim, 0.0));
  for (auto& m : means) {
    for (double& x : m) x = stream.gaussian();
  }
  if (num_classes <= dim) {
    for (int k = 0; k < num_classes; ++k) {
      for (int prev = 0; prev < k; ++prev) {
        double dot = 0.0;
        for (int d = 0; d < dim; ++d) dot += means[k][d] * means[prev][d];
        for (int d = 0; d < dim; ++d) means[k][d] -= dot * means[prev][d];
      }
      double norm = l2(means[k]);
      for (int d = 0; d < dim; ++d) means[k][d] /= norm;
    }
  } else {
    for (auto& m : means) {
      double norm = l2(m);
      for (double& x : m) x /= norm;
    }
  }
  for (auto& m : means) {
    for (double& x : m) x *= separation;
  }

  Dataset data;
  data.dim = dim;
  data.num_classes = num_classes;
  data.labels.resize(num_samples);
  data.features.resize(static_cast<std::size_t>(num_samples) * dim);
  for (int i = 0; i < num_samples; ++i) {
    const int k = i % num_classes;  // round-robin keeps counts within one
    data.labels[i] = k;
    for (int d = 0; d < dim; ++d) {
      data.features[static_cast<std::size_t>(i) * dim + d] =
          means[k][d] + stream.gaussian();
    }
  }
  return data;
}

Dataset load_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path + ": cannot open file");
  std::string line;
  if (!std::getline(in, line)) throw ParseError(path + ":1: empty file");
  if (!line.empty() && line.back() == '\r') line.pop_back();

  std::vector<std::string> header;
  {
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) header.push_back(cell);
  }
  if (header.empty() || header.back() != "label") {
    throw ParseError(path + ":1: last header column must be \"label\"");
  }
  const int dim = static_cast<int>(header.size()) - 1;
  if (dim < 1) throw ParseError(path + ":1: no feature columns");
  for (int d = 0; d < dim; ++d) {
    if (header[d] != "f" + std::to_string(d)) {
      throw ParseError(path + ":1: expected header column \"f" +
                       std::to_string(d) + "\", got \"" + header[d] + "\"");
    }
  }

  Dataset data;
  data.dim = dim;
  int max_label = -1;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    std::vector<std::string> cells;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (static_cast<int>(cells.size()) != dim + 1) {
      throw ParseError(path + ":" + std::to_string(line_no) + ": expected " +
                       std::to_string(dim + 1) + " cells, got " +
                       std::to_string(cells.size()));
    }
    for (int d = 0; d < dim; ++d) {
      std::size_t used = 0;
      double value = 0;
      try {
        value = std::stod(cells[d], &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != cells[d].size() || cells[d].empty()) {
        throw ParseError(path + ":" + std::to_string(line_no) +
                         ": non-numeric cell \"" + cells[d] + "\" in column f" +
                         std::to_string(d));
      }
      data.features.push_back(value);
    }
    const std::string& label_cell = cells[dim];
    std::size_t used = 0;
    long label = 0;
    try {
      label = std::stol(label_cell, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != label_cell.size() || label_cell.empty()) {
      throw ParseError(path + ":" + std::to_string(line_no) +
                       ": non-integer label \"" + label_cell + "\"");
    }
    if (label < 0) {
      throw ParseError(path + ":" + std::to_string(line_no) +
                       ": negative label " + std::to_string(label));
    }
    data.labels.push_back(static_cast<int>(label));
    max_label = std::max(max_label, static_cast<int>(label));
  }
  if (data.labels.empty()) throw ParseError(path + ": no data rows");
  data.num_classes = max_label + 1;
  return data;
}

void save_csv(const Dataset& data, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("save_csv: cannot open " + path + " for writing");
  for (int d = 0; d < data.dim; ++d) out << "f" << d << ",";
  out << "label\n";
  char buf[64];
  for (std::size_t i = 0; i < data.size(); ++i) {
    auto row = data.row(i);
    for (int d = 0; d < data.dim; ++d) {
      // %.17g round-trips doubles exactly.
      std::snprintf(buf, sizeof(buf), "%.17g", row[d]);
      out << buf << ",";
    }
    out << data.labels[i] << "\n";
  }
  if (!out) throw Error("save_csv: write to " + path + " failed");
}

Partition dirichlet_partition(std::span<const int> labels,
                              std::span<const int> indices, int num_clients,
                              double alpha, DeterministicStream& stream) {
  if (!(alpha > 0)) throw ValidationError("partition: alpha must be > 0");
  if (num_clients < 1) throw ValidationError("partition: num_clients >= 1");
  if (indices.size() < static_cast<std::size_t>(num_clients)) {
    throw ValidationError("partition: more clients than samples");
  }

  int num_classes = 0;
  for (int idx : indices) num_classes = std::max(num_classes, labels[idx] + 1);

  std::vector<std::vector<int>> by_class(num_classes);
  for (int idx : indices) by_class[labels[idx]].push_back(idx);

  constexpr int kMaxRetries = 100;
  for (int attempt = 0; attempt < kMaxRetries; ++attempt) {
    Partition part;
    part.assignments.assign(num_clients, {});
    for (int k = 0; k < num_classes; ++k) {
      auto class_indices = by_class[k];
      shuffle_indices(class_indices, stream);
      std::vector<double> proportions(num_clients);
      double total = 0.0;
      for (double& g : proportions) {
        g = stream.gamma(alpha);
        total += g;
      }
      if (total <= 0.0) {
        std::fill(proportions.begin(), proportions.end(), 1.0);
      }
      const auto counts =
          apportion(proportions, static_cast<int>(class_indices.size()));
      std::size_t cursor = 0;
      for (int c = 0; c < num_clients; ++c) {
        for (int j = 0; j < counts[c]; ++j) {
          part.assignments[c].push_back(class_indices[cursor++]);
        }
      }
    }
    const bool all_nonempty =
        std::all_of(part.assignments.begin(), part.assignments.end(),
                    [](const auto& a) { return !a.empty(); });
    if (all_nonempty) return part;
  }
  throw Error("partition: failed to produce nonempty clients after 100 draws");
}

TrainValSplit split_train_val(const Dataset& data, double train_fraction,
                              DeterministicStream& stream) {
  if (!(train_fraction > 0.0) || !(train_fraction < 1.0)) {
    throw ValidationError("split: train_fraction must be in (0, 1)");
  }
  const int n = static_cast<int>(data.size());
  const int train_total = static_cast<int>(std::llround(train_fraction * n));

  std::vector<std::vector<int>> by_class(data.num_classes);
  for (int i = 0; i < n; ++i) by_class[data.labels[i]].push_back(i);

  TrainValSplit split;
  const bool can_stratify =
      std::all_of(by_class.begin(), by_class.end(),
                  [](const auto& c) { return c.size() >= 2; });
  if (!can_stratify) {
    split.stratified = false;
    std::vector<int> all(n);
    std::iota(all.begin(), all.end(), 0);
    shuffle_indices(all, stream);
    split.train.assign(all.begin(), all.begin() + train_total);
    split.val.assign(all.begin() + train_total, all.end());
    return split;
  }

  std::vector<double> class_sizes;
  for (const auto& c : by_class) {
    class_sizes.push_back(static_cast<double>(c.size()));
  }
  const auto train_counts = apportion(class_sizes, train_total);
  for (int k = 0; k < data.num_classes; ++k) {
    auto class_indices = by_class[k];
    shuffle_indices(class_indices, stream);
    for (std::size_t i = 0; i < class_indices.size(); ++i) {
      if (i < static_cast<std::size_t>(train_counts[k])) {
        split.train.push_back(class_indices[i]);
      } else {
        split.val.push_back(class_indices[i]);
      }
    }
  }
  return split;
}

std::vector<std::vector<int>> class_histograms(const Dataset& data,
                                               const Partition& partition) {
  std::vector<std::vector<int>> hist(partition.num_clients(),
                                     std::vector<int>(data.num_classes, 0));
  for (std::size_t c = 0; c < partition.num_clients(); ++c) {
    for (int idx : partition.assignments[c]) {
      hist[c][data.labels[idx]] += 1;
    }
  }
  return hist;
}

}  // namespace fedbench
