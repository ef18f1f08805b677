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

#include "sdm/metrics.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <vector>

#include "json.hpp"
#include "sdm/error.h"

namespace sdm {

namespace {

void check_lengths(std::size_t a, std::size_t b) {
  if (a != b) {
    throw ConfigError("length mismatch: " + std::to_string(a) + " labels vs " +
                      std::to_string(b) + " predictions");
  }
  if (a == 0) throw ConfigError("metrics need at least one example");
}

}  // namespace

ConfusionMatrix confusion(std::span<const int> y_true,
                          std::span<const int> y_pred) {
  check_lengths(y_true.size(), y_pred.size());
  ConfusionMatrix cm;
  for (std::size_t i = 0; i < y_true.size(); ++i) {
    const int t = y_true[i];
    const int p = y_pred[i];
    if ((t != 0 && t != 1) || (p != 0 && p != 1)) {
      throw DataError("confusion matrix expects 0/1 entries");
    }
    if (t == 1) {
      p == 1 ? ++cm.tp : ++cm.fn;
    } else {
      p == 1 ? ++cm.fp : ++cm.tn;
    }
  }
  return cm;
}

double auc_roc(std::span<const int> y_true, std::span<const double> probs) {
  check_lengths(y_true.size(), probs.size());
  const std::size_t n = y_true.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return probs[a] < probs[b];
  });

  // Sum of 1-based average ranks of the positives.
  double positive_rank_sum = 0.0;
  std::size_t positives = 0;
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j < n && probs[order[j]] == probs[order[i]]) ++j;
    const double avg_rank = 0.5 * static_cast<double>(i + 1 + j);
    for (std::size_t k = i; k < j; ++k) {
      const int label = y_true[order[k]];
      if (label != 0 && label != 1) throw DataError("AUC expects 0/1 labels");
      if (label == 1) {
        positive_rank_sum += avg_rank;
        ++positives;
      }
    }
    i = j;
  }
  const std::size_t negatives = n - positives;
  if (positives == 0 || negatives == 0) {
    throw DataError("AUC is undefined when y_true holds a single class");
  }
  const auto np = static_cast<double>(positives);
  const auto nn = static_cast<double>(negatives);
  return (positive_rank_sum - np * (np + 1.0) / 2.0) / (np * nn);
}

MetricsReport classification_report(std::span<const int> y_true,
                                    std::span<const double> probs,
                                    double theta) {
  check_lengths(y_true.size(), probs.size());
  std::vector<int> y_pred(probs.size());
  for (std::size_t i = 0; i < probs.size(); ++i) {
    y_pred[i] = probs[i] >= theta ? 1 : 0;
  }
  MetricsReport r;
  r.confusion = confusion(y_true, y_pred);
  const auto& cm = r.confusion;
  r.accuracy = static_cast<double>(cm.tp + cm.tn) /
               static_cast<double>(cm.total());
  if (cm.tp + cm.fp > 0) {
    r.precision = static_cast<double>(cm.tp) / static_cast<double>(cm.tp + cm.fp);
  } else {
    r.precision_degenerate = true;
  }
  if (cm.tp + cm.fn > 0) {
    r.recall = static_cast<double>(cm.tp) / static_cast<double>(cm.tp + cm.fn);
  } else {
    r.recall_degenerate = true;
  }
  if (r.precision + r.recall > 0.0) {
    r.f1 = 2.0 * r.precision * r.recall / (r.precision + r.recall);
  } else {
    r.f1_degenerate = true;
  }
  r.auc = auc_roc(y_true, probs);
  return r;
}

double sweep_threshold(std::span<const int> y_true,
                       std::span<const double> probs) {
  check_lengths(y_true.size(), probs.size());
  std::set<double> candidates(probs.begin(), probs.end());
  candidates.insert(0.5);
  double best_theta = 0.5;
  std::size_t best_correct = 0;
  bool first = true;
  for (const double theta : candidates) {
    std::size_t correct = 0;
    for (std::size_t i = 0; i < probs.size(); ++i) {
      correct += ((probs[i] >= theta ? 1 : 0) == y_true[i]) ? 1 : 0;
    }
    const bool closer =
        std::abs(theta - 0.5) < std::abs(best_theta - 0.5);
    if (first || correct > best_correct ||
        (correct == best_correct && closer)) {
      best_theta = theta;
      best_correct = correct;
      first = false;
    }
  }
  return best_theta;
}

std::string report_to_json(const MetricsReport& report,
                           const ReportContext& context) {
  nlohmann::ordered_json j;
  j["species"] = context.species;
  j["model"] = context.model;
  j["split"] = context.split;
  j["accuracy"] = report.accuracy;
  j["precision"] = report.precision;
  j["recall"] = report.recall;
  j["f1"] = report.f1;
  j["auc"] = report.auc;
  j["confusion"] = {{"tp", report.confusion.tp},
                    {"fp", report.confusion.fp},
                    {"fn", report.confusion.fn},
                    {"tn", report.confusion.tn}};
  return j.dump(2) + "\n";
}

}  // namespace sdm
