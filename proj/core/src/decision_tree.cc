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

#include "sdm/decision_tree.h"

#include <algorithm>
#include <numeric>
#include <random>
#include <string>
#include <utility>

#include "sdm/error.h"

namespace sdm {

std::string_view to_string(TreeTask task) {
  return task == TreeTask::kClassification ? "classification" : "regression";
}

void TreeConfig::validate(std::size_t arity) const {
  if (max_depth < 1) throw ConfigError("max_depth must be >= 1");
  if (min_samples_split < 2) throw ConfigError("min_samples_split must be >= 2");
  if (max_features && (*max_features < 1 || *max_features > arity)) {
    throw ConfigError("max_features must be in [1, " + std::to_string(arity) +
                      "], got " + std::to_string(*max_features));
  }
}

DecisionTree DecisionTree::from_nodes(std::vector<TreeNode> nodes,
                                      std::size_t num_features) {
  if (nodes.empty()) throw ConfigError("tree has no nodes");
  const auto count = static_cast<std::int64_t>(nodes.size());
  // Pre-order layout: every child index is greater than its parent's, which
  // rules out cycles; each node may have only one parent.
  std::vector<bool> has_parent(nodes.size(), false);
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const TreeNode& node = nodes[i];
    if (node.is_leaf()) continue;
    if (node.feature < 0 ||
        static_cast<std::size_t>(node.feature) >= num_features) {
      throw ConfigError("node " + std::to_string(i) + " has feature index " +
                        std::to_string(node.feature) + " outside [0, " +
                        std::to_string(num_features) + ")");
    }
    for (const std::int32_t child : {node.left, node.right}) {
      if (child <= static_cast<std::int64_t>(i) || child >= count ||
          has_parent[static_cast<std::size_t>(child)]) {
        throw ConfigError("node " + std::to_string(i) +
                          " has invalid child index " + std::to_string(child));
      }
      has_parent[static_cast<std::size_t>(child)] = true;
    }
  }
  for (std::size_t i = 1; i < nodes.size(); ++i) {
    if (!has_parent[i]) {
      throw ConfigError("node " + std::to_string(i) + " is unreachable");
    }
  }
  DecisionTree tree;
  tree.nodes_ = std::move(nodes);
  tree.num_features_ = num_features;
  return tree;
}

std::size_t DecisionTree::depth() const {
  std::vector<std::size_t> depth_of(nodes_.size(), 0);
  std::size_t max_depth = 0;
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    max_depth = std::max(max_depth, depth_of[i]);
    if (!nodes_[i].is_leaf()) {
      depth_of[static_cast<std::size_t>(nodes_[i].left)] = depth_of[i] + 1;
      depth_of[static_cast<std::size_t>(nodes_[i].right)] = depth_of[i] + 1;
    }
  }
  return max_depth;
}

std::size_t DecisionTree::num_leaves() const {
  return static_cast<std::size_t>(
      std::count_if(nodes_.begin(), nodes_.end(),
                    [](const TreeNode& n) { return n.is_leaf(); }));
}

double DecisionTree::predict(std::span<const double> x) const {
  if (x.size() != num_features_) {
    throw ConfigError("feature vector has " + std::to_string(x.size()) +
                      " values, tree expects " + std::to_string(num_features_));
  }
  return predict_unchecked(x);
}

double gini(std::span<const int> labels) {
  if (labels.empty()) throw DataError("gini of an empty label set");
  std::size_t positives = 0;
  for (const int label : labels) {
    if (label != 0 && label != 1) throw DataError("gini expects 0/1 labels");
    positives += static_cast<std::size_t>(label);
  }
  const auto n = static_cast<double>(labels.size());
  const auto n1 = static_cast<double>(positives);
  const double n0 = n - n1;
  return 2.0 * n0 * n1 / (n * n);
}

namespace {

// Splits whose gain is below this fraction of the parent impurity are
// treated as rounding noise.
constexpr double kRelativeGainFloor = 1e-12;

// Size-weighted impurity n * I(node), which is what the gain formula sums.
// Classification: n * 2 p0 p1 = 2 n0 n1 / n, symmetric in the two classes.
double weighted_gini(double n1, double n) {
  return 2.0 * (n - n1) * n1 / n;
}

// Regression: n * variance = sum of squares about the mean, computed on
// targets already centred on the parent mean.
double weighted_sse(double sum, double sum_sq, double n) {
  return std::max(0.0, sum_sq - sum * sum / n);
}

struct SplitSearch {
  const FeatureMatrix& X;
  std::span<const double> y;
  TreeTask task;
  // Scratch reused across features.
  std::vector<std::pair<double, double>> column;

  std::optional<Split> run(std::span<const std::size_t> rows,
                           std::span<const std::size_t> features) {
    const std::size_t m = rows.size();
    if (m < 2) return std::nullopt;
    const auto md = static_cast<double>(m);

    double parent_mean = 0.0;
    if (task == TreeTask::kRegression) {
      for (const auto r : rows) parent_mean += y[r];
      parent_mean /= md;
    }

    column.resize(m);
    std::optional<Split> best;
    double parent_weighted = 0.0;
    bool parent_known = false;

    for (const std::size_t f : features) {
      for (std::size_t i = 0; i < m; ++i) {
        const std::size_t r = rows[i];
        column[i] = {X(r, f), task == TreeTask::kRegression
                                  ? y[r] - parent_mean
                                  : y[r]};
      }
      std::sort(column.begin(), column.end());

      double total = 0.0, total_sq = 0.0;
      for (const auto& [v, t] : column) {
        total += t;
        total_sq += t * t;
      }
      if (!parent_known) {
        parent_weighted = task == TreeTask::kClassification
                              ? weighted_gini(total, md)
                              : weighted_sse(total, total_sq, md);
        parent_known = true;
      }
      if (!(parent_weighted > 0.0)) return std::nullopt;

      double left_sum = 0.0, left_sq = 0.0;
      for (std::size_t i = 0; i + 1 < m; ++i) {
        left_sum += column[i].second;
        left_sq += column[i].second * column[i].second;
        const double a = column[i].first;
        const double b = column[i + 1].first;
        if (!(a < b)) continue;

        const auto nl = static_cast<double>(i + 1);
        const double nr = md - nl;
        double children;
        if (task == TreeTask::kClassification) {
          children = weighted_gini(left_sum, nl) +
                     weighted_gini(total - left_sum, nr);
        } else {
          children = weighted_sse(left_sum, left_sq, nl) +
                     weighted_sse(total - left_sum, total_sq - left_sq, nr);
        }
        const double gain = (parent_weighted - children) / md;
        if (!(gain > kRelativeGainFloor * parent_weighted / md)) continue;
        if (best && !(gain > best->gain)) continue;

        double threshold = 0.5 * (a + b);
        if (!(threshold > a)) threshold = b;
        best = Split{f, threshold, gain};
      }
    }
    return best;
  }
};

}  // namespace

std::optional<Split> best_split(const FeatureMatrix& X,
                                std::span<const double> y,
                                std::span<const std::size_t> candidate_features,
                                TreeTask task) {
  if (X.rows() != y.size()) {
    throw ConfigError("feature matrix has " + std::to_string(X.rows()) +
                      " rows but target vector has " + std::to_string(y.size()));
  }
  std::vector<std::size_t> features(candidate_features.begin(),
                                    candidate_features.end());
  for (const auto f : features) {
    if (f >= X.cols()) throw ConfigError("candidate feature out of range");
  }
  std::sort(features.begin(), features.end());
  std::vector<std::size_t> rows(X.rows());
  std::iota(rows.begin(), rows.end(), std::size_t{0});
  SplitSearch search{X, y, task, {}};
  return search.run(rows, features);
}

class TreeBuilder {
 public:
  TreeBuilder(const FeatureMatrix& X, std::span<const double> y,
              const TreeConfig& config, Rng& rng)
      : X_(X),
        y_(y),
        config_(config),
        rng_(rng),
        search_{X, y, config.task, {}},
        all_features_(X.cols()) {
    std::iota(all_features_.begin(), all_features_.end(), std::size_t{0});
  }

  DecisionTree build() {
    std::vector<std::size_t> rows(X_.rows());
    std::iota(rows.begin(), rows.end(), std::size_t{0});
    grow(rows, 0);
    DecisionTree tree;
    tree.nodes_ = std::move(nodes_);
    tree.num_features_ = X_.cols();
    return tree;
  }

 private:
  std::int32_t grow(std::span<std::size_t> rows, std::size_t depth) {
    const auto index = static_cast<std::int32_t>(nodes_.size());
    nodes_.emplace_back();

    const std::size_t m = rows.size();
    double sum = 0.0;
    double lo = y_[rows[0]], hi = y_[rows[0]];
    for (const auto r : rows) {
      sum += y_[r];
      lo = std::min(lo, y_[r]);
      hi = std::max(hi, y_[r]);
    }
    // For 0/1 targets the mean is exactly the positive fraction.
    const double value = sum / static_cast<double>(m);
    nodes_[static_cast<std::size_t>(index)].value = value;
    nodes_[static_cast<std::size_t>(index)].n = m;

    const bool pure = lo == hi;
    if (depth >= config_.max_depth || m < config_.min_samples_split || pure) {
      return index;
    }
    const auto split = search_.run(rows, draw_features());
    if (!split) return index;

    const auto mid = std::partition(rows.begin(), rows.end(), [&](std::size_t r) {
      return X_(r, split->feature) < split->threshold;
    });
    const auto n_left = static_cast<std::size_t>(mid - rows.begin());
    // Keep child row order independent of partition's internal swaps.
    std::sort(rows.begin(), mid);
    std::sort(mid, rows.end());

    const std::int32_t left = grow(rows.first(n_left), depth + 1);
    const std::int32_t right = grow(rows.subspan(n_left), depth + 1);
    TreeNode& node = nodes_[static_cast<std::size_t>(index)];
    node.feature = static_cast<std::int32_t>(split->feature);
    node.threshold = split->threshold;
    node.left = left;
    node.right = right;
    node.impurity_decrease = split->gain;
    return index;
  }

  std::span<const std::size_t> draw_features() {
    const std::size_t arity = X_.cols();
    const std::size_t k = config_.features_per_node(arity);
    if (k >= arity) return all_features_;
    // Partial Fisher-Yates over a fresh identity permutation.
    drawn_.resize(arity);
    std::iota(drawn_.begin(), drawn_.end(), std::size_t{0});
    for (std::size_t i = 0; i < k; ++i) {
      std::uniform_int_distribution<std::size_t> pick(i, arity - 1);
      std::swap(drawn_[i], drawn_[pick(rng_)]);
    }
    drawn_.resize(k);
    std::sort(drawn_.begin(), drawn_.end());
    return drawn_;
  }

  const FeatureMatrix& X_;
  std::span<const double> y_;
  const TreeConfig& config_;
  Rng& rng_;
  SplitSearch search_;
  std::vector<std::size_t> all_features_;
  std::vector<std::size_t> drawn_;
  std::vector<TreeNode> nodes_;
};

DecisionTree train_decision_tree(const FeatureMatrix& X,
                                 std::span<const double> y,
                                 const TreeConfig& config, Rng& rng) {
  if (y.empty()) throw DataError("cannot train a tree on zero rows");
  if (X.rows() != y.size()) {
    throw ConfigError("feature matrix has " + std::to_string(X.rows()) +
                      " rows but target vector has " + std::to_string(y.size()));
  }
  if (X.cols() == 0) throw ConfigError("feature matrix has no columns");
  config.validate(X.cols());
  if (config.task == TreeTask::kClassification) {
    for (const double v : y) {
      if (v != 0.0 && v != 1.0) {
        throw DataError("classification targets must be 0 or 1");
      }
    }
  }
  return TreeBuilder(X, y, config, rng).build();
}

}  // namespace sdm
