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

#include "fedbench/metrics.hpp"

#include <boost/math/distributions/students_t.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "fedbench/error.hpp"

namespace fedbench {
namespace {

double mean(std::span<const double> v) {
  return std::accumulate(v.begin(), v.end(), 0.0) / v.size();
}

double sample_variance(std::span<const double> v, double m) {
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return s / (v.size() - 1);
}

// One-vs-rest AUC via the midrank statistic.
double binary_auc(const std::vector<double>& scores,
                  const std::vector<bool>& positive) {
  const std::size_t n = scores.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });
  std::vector<double> ranks(n, 0.0);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && scores[order[j + 1]] == scores[order[i]]) ++j;
    const double midrank = (static_cast<double>(i) + j) / 2.0 + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = midrank;
    i = j + 1;
  }
  double rank_sum_pos = 0.0;
  std::size_t n_pos = 0;
  for (std::size_t k = 0; k < n; ++k) {
    if (positive[k]) {
      rank_sum_pos += ranks[k];
      ++n_pos;
    }
  }
  const std::size_t n_neg = n - n_pos;
  return (rank_sum_pos - n_pos * (n_pos + 1.0) / 2.0) /
         (static_cast<double>(n_pos) * n_neg);
}

}  // namespace

ConfusionMatrix ConfusionMatrix::from_labels(std::span<const int> true_labels,
                                             std::span<const int> predicted,
                                             int num_classes) {
  if (true_labels.size() != predicted.size()) {
    throw ValidationError("confusion: label vectors differ in length");
  }
  if (num_classes < 2) throw ValidationError("confusion: need >= 2 classes");
  ConfusionMatrix cm;
  cm.num_classes = num_classes;
  cm.counts.assign(static_cast<std::size_t>(num_classes) * num_classes, 0);
  for (std::size_t i = 0; i < true_labels.size(); ++i) {
    if (true_labels[i] < 0 || true_labels[i] >= num_classes ||
        predicted[i] < 0 || predicted[i] >= num_classes) {
      throw ValidationError("confusion: label out of range");
    }
    cm.counts[static_cast<std::size_t>(true_labels[i]) * num_classes +
              predicted[i]] += 1;
  }
  return cm;
}

long long ConfusionMatrix::total() const {
  return std::accumulate(counts.begin(), counts.end(), 0LL);
}

MetricsReport metrics_from_confusion(const ConfusionMatrix& cm) {
  const int K = cm.num_classes;
  const double total = static_cast<double>(cm.total());
  MetricsReport report;
  report.confusion = cm;

  double trace = 0.0;
  std::vector<double> row_sums(K, 0.0);  // true-class counts
  std::vector<double> col_sums(K, 0.0);  // predicted-class counts
  for (int t = 0; t < K; ++t) {
    trace += static_cast<double>(cm.at(t, t));
    for (int p = 0; p < K; ++p) {
      row_sums[t] += static_cast<double>(cm.at(t, p));
      col_sums[p] += static_cast<double>(cm.at(t, p));
    }
  }
  report.accuracy = total > 0 ? trace / total : 0.0;

  double precision_sum = 0.0;
  double recall_sum = 0.0;
  double f1_sum = 0.0;
  for (int k = 0; k < K; ++k) {
    const double tp = static_cast<double>(cm.at(k, k));
    const double prec = col_sums[k] > 0 ? tp / col_sums[k] : 0.0;
    const double rec = row_sums[k] > 0 ? tp / row_sums[k] : 0.0;
    precision_sum += prec;
    recall_sum += rec;
    f1_sum += (prec + rec) > 0 ? 2.0 * prec * rec / (prec + rec) : 0.0;
  }
  report.precision = precision_sum / K;
  report.recall = recall_sum / K;
  report.f1 = f1_sum / K;

  // Covariance form: (s * trace - t.p) / sqrt((s^2 - p.p)(s^2 - t.t)).
  double tp_dot = 0.0;
  double pp_dot = 0.0;
  double tt_dot = 0.0;
  for (int k = 0; k < K; ++k) {
    tp_dot += row_sums[k] * col_sums[k];
    pp_dot += col_sums[k] * col_sums[k];
    tt_dot += row_sums[k] * row_sums[k];
  }
  const double cov_xy = total * trace - tp_dot;
  const double cov_xx = total * total - pp_dot;
  const double cov_yy = total * total - tt_dot;
  report.mcc = (cov_xx > 0 && cov_yy > 0)
                   ? cov_xy / std::sqrt(cov_xx * cov_yy)
                   : 0.0;
  report.auc = 0.0;
  return report;
}

MetricsReport classification_metrics(std::span<const int> true_labels,
                                     std::span<const int> predicted,
                                     std::span<const double> scores,
                                     int num_classes) {
  MetricsReport report = metrics_from_confusion(
      ConfusionMatrix::from_labels(true_labels, predicted, num_classes));
  if (scores.size() != true_labels.size() * static_cast<std::size_t>(num_classes)) {
    throw ValidationError("metrics: scores must be n x K");
  }
  const std::size_t n = true_labels.size();
  double auc_sum = 0.0;
  int auc_classes = 0;
  std::vector<double> class_scores(n);
  std::vector<bool> positive(n);
  for (int k = 0; k < num_classes; ++k) {
    std::size_t n_pos = 0;
    for (std::size_t i = 0; i < n; ++i) {
      class_scores[i] = scores[i * num_classes + k];
      positive[i] = true_labels[i] == k;
      if (positive[i]) ++n_pos;
    }
    if (n_pos == 0 || n_pos == n) continue;  // AUC undefined for this class
    auc_sum += binary_auc(class_scores, positive);
    ++auc_classes;
  }
  report.auc = auc_classes > 0 ? auc_sum / auc_classes : 0.5;
  return report;
}

StatTestResult paired_t_test(std::span<const double> a,
                             std::span<const double> b) {
  if (a.size() != b.size()) {
    throw ValidationError("t-test: samples differ in length");
  }
  if (a.size() < 2) throw ValidationError("t-test: need >= 2 pairs");
  const std::size_t n = a.size();
  std::vector<double> diff(n);
  for (std::size_t i = 0; i < n; ++i) diff[i] = a[i] - b[i];
  const double d_mean = mean(diff);
  const double d_var = sample_variance(diff, d_mean);

  StatTestResult result;
  if (d_var == 0.0) {
    result.zero_variance = true;
    if (d_mean == 0.0) {
      result.statistic = 0.0;
      result.p_value = 1.0;
    } else {
      result.statistic = d_mean > 0
                             ? std::numeric_limits<double>::infinity()
                             : -std::numeric_limits<double>::infinity();
      result.p_value = 0.0;
    }
  } else {
    result.statistic = d_mean / std::sqrt(d_var / n);
    boost::math::students_t_distribution<double> dist(
        static_cast<double>(n - 1));
    result.p_value =
        2.0 * boost::math::cdf(dist, -std::abs(result.statistic));
  }
  result.adjusted_p = result.p_value;
  const double ma = mean(a);
  const double mb = mean(b);
  const double va = sample_variance(a, ma);
  const double vb = sample_variance(b, mb);
  const double pooled =
      std::sqrt(((n - 1) * va + (n - 1) * vb) / (2.0 * n - 2.0));
  result.effect_size = pooled > 0 ? (ma - mb) / pooled : 0.0;
  return result;
}

std::vector<double> bonferroni(std::span<const double> p_values, int m) {
  if (m < static_cast<int>(p_values.size())) {
    throw ValidationError("bonferroni: m below number of p-values");
  }
  std::vector<double> adjusted;
  adjusted.reserve(p_values.size());
  for (double p : p_values) adjusted.push_back(std::min(1.0, m * p));
  return adjusted;
}

double cohens_d(std::span<const double> a, std::span<const double> b) {
  if (a.size() < 2 || b.size() < 2) {
    throw ValidationError("cohens_d: need >= 2 samples per group");
  }
  const double ma = mean(a);
  const double mb = mean(b);
  const double va = sample_variance(a, ma);
  const double vb = sample_variance(b, mb);
  const double pooled = std::sqrt(
      ((a.size() - 1) * va + (b.size() - 1) * vb) / (a.size() + b.size() - 2.0));
  if (pooled == 0.0) throw DomainError("cohens_d: zero pooled sd");
  return (ma - mb) / pooled;
}

}  // namespace fedbench
