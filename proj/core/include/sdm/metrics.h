/*
 * Copyright 2026 The sdm Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef SDM_METRICS_H_
#define SDM_METRICS_H_

#include <cstddef>
#include <span>
#include <string>

namespace sdm {

struct ConfusionMatrix {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;
  std::size_t tn = 0;

  std::size_t total() const { return tp + fp + fn + tn; }

  friend bool operator==(const ConfusionMatrix&, const ConfusionMatrix&) = default;
};

struct MetricsReport {
  double accuracy = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  double auc = 0.0;
  ConfusionMatrix confusion;
  // Set when a zero denominator forced precision, recall or f1 to 0.
  bool precision_degenerate = false;
  bool recall_degenerate = false;
  bool f1_degenerate = false;
};

// Throws ConfigError on length mismatch or empty input, DataError on a
// non-binary entry.
ConfusionMatrix confusion(std::span<const int> y_true, std::span<const int> y_pred);

// Mann-Whitney AUC: the fraction of (positive, negative) pairs ranked
// correctly, ties counting one half. Uses average ranks, O(n log n). Throws
// DataError unless both classes are present.
double auc_roc(std::span<const int> y_true, std::span<const double> probs);

// Thresholds probs with `p >= theta` and computes every metric.
MetricsReport classification_report(std::span<const int> y_true,
                                     std::span<const double> probs,
                                     double theta);

// Threshold maximising accuracy over the distinct probability values (plus
// 0.5). Ties prefer the value closest to 0.5, then the smaller one.
double sweep_threshold(std::span<const int> y_true, std::span<const double> probs);

struct ReportContext {
  std::string species;
  std::string model;
  std::string split;
};

// {species, model, split, accuracy, precision, recall, f1, auc,
//  confusion: {tp, fp, fn, tn}} with that key order.
std::string report_to_json(const MetricsReport& report,
                           const ReportContext& context);

}  // namespace sdm

#endif  // SDM_METRICS_H_
