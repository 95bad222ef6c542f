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

#ifndef FEDBENCH_METRICS_HPP_
#define FEDBENCH_METRICS_HPP_

#include <span>
#include <vector>

namespace fedbench {

// K x K confusion counts, rows = true class, cols = predicted class.
struct ConfusionMatrix {
  int num_classes = 0;
  std::vector<long long> counts;  // row-major

  static ConfusionMatrix from_labels(std::span<const int> true_labels,
                                     std::span<const int> predicted,
                                     int num_classes);
  long long at(int true_class, int predicted_class) const {
    return counts[static_cast<std::size_t>(true_class) * num_classes +
                  predicted_class];
  }
  long long total() const;
};

struct MetricsReport {
  double accuracy = 0.0;
  double precision = 0.0;  // macro
  double recall = 0.0;     // macro
  double f1 = 0.0;         // macro (mean of per-class F1)
  double mcc = 0.0;        // multiclass, covariance form
  double auc = 0.0;        // macro one-vs-rest, midrank ties
  ConfusionMatrix confusion;
};

// Macro-averaged classification metrics. A class never predicted
// contributes precision 0; degenerate confusion matrices (single predicted
// or single true class) yield MCC 0. `scores` holds K per-class
// probabilities per sample, row-major; classes with no positive or no
// negative sample are skipped in the AUC macro average.
MetricsReport classification_metrics(std::span<const int> true_labels,
                                     std::span<const int> predicted,
                                     std::span<const double> scores,
                                     int num_classes);

// Metrics computable from a confusion matrix alone (no AUC).
MetricsReport metrics_from_confusion(const ConfusionMatrix& cm);

struct StatTestResult {
  double statistic = 0.0;
  double p_value = 1.0;
  double effect_size = 0.0;  // Cohen's d
  double adjusted_p = 1.0;   // after Bonferroni
  bool zero_variance = false;
};

// Two-sided paired t-test on (a - b). With zero-variance differences the
// p-value is 1 when the mean difference is 0, otherwise 0 (flagged).
StatTestResult paired_t_test(std::span<const double> a,
                             std::span<const double> b);

// min(1, m * p) per value; m must be at least the number of p-values.
std::vector<double> bonferroni(std::span<const double> p_values, int m);

// (mean(a) - mean(b)) / pooled sd. Zero pooled sd is a domain error.
double cohens_d(std::span<const double> a, std::span<const double> b);

}  // namespace fedbench

#endif  // FEDBENCH_METRICS_HPP_
