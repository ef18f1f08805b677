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

#ifndef SDM_DECISION_TREE_H_
#define SDM_DECISION_TREE_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "sdm/matrix.h"
#include "sdm/random.h"

namespace sdm {

enum class TreeTask { kClassification, kRegression };

std::string_view to_string(TreeTask task);

struct TreeConfig {
  std::size_t max_depth = 10;
  std::size_t min_samples_split = 2;
  // Features drawn per node; nullopt uses every feature.
  std::optional<std::size_t> max_features;
  TreeTask task = TreeTask::kClassification;

  // Throws ConfigError unless max_depth >= 1, min_samples_split >= 2 and
  // 1 <= max_features <= arity.
  void validate(std::size_t arity) const;
  std::size_t features_per_node(std::size_t arity) const {
    return max_features.value_or(arity);
  }

  friend bool operator==(const TreeConfig&, const TreeConfig&) = default;
};

// One node of a flattened binary tree. A node is a leaf when `feature` is
// kLeaf; otherwise rows with x[feature] < threshold go to `left`.
struct TreeNode {
  static constexpr std::int32_t kLeaf = -1;

  std::int32_t feature = kLeaf;
  double threshold = 0.0;
  std::int32_t left = -1;
  std::int32_t right = -1;
  // Positive-class fraction (classification) or mean target (regression).
  // Internal nodes keep the statistic of the rows that reached them.
  double value = 0.0;
  std::size_t n = 0;
  // Parent impurity minus the size-weighted child impurity; 0 on leaves.
  double impurity_decrease = 0.0;

  bool is_leaf() const { return feature == kLeaf; }

  friend bool operator==(const TreeNode&, const TreeNode&) = default;
};

// Trained CART tree stored in pre-order; node 0 is the root. Immutable.
class DecisionTree {
 public:
  // Checks child indices, feature indices and acyclicity. Throws
  // ConfigError on a malformed node list.
  static DecisionTree from_nodes(std::vector<TreeNode> nodes,
                                 std::size_t num_features);

  const std::vector<TreeNode>& nodes() const { return nodes_; }
  const TreeNode& root() const { return nodes_.front(); }
  std::size_t num_features() const { return num_features_; }

  // Longest root-to-leaf path, in edges.
  std::size_t depth() const;
  std::size_t num_leaves() const;

  // Throws ConfigError on an arity mismatch.
  double predict(std::span<const double> x) const;
  // No arity check; callers guarantee x.size() == num_features().
  double predict_unchecked(std::span<const double> x) const {
    const TreeNode* node = &nodes_[0];
    while (!node->is_leaf()) {
      node = &nodes_[static_cast<std::size_t>(
          x[static_cast<std::size_t>(node->feature)] < node->threshold
              ? node->left
              : node->right)];
    }
    return node->value;
  }

  friend bool operator==(const DecisionTree&, const DecisionTree&) = default;

 private:
  friend class TreeBuilder;
  DecisionTree() = default;

  std::vector<TreeNode> nodes_;
  std::size_t num_features_ = 0;
};

// Gini impurity 2 * p0 * p1 (= 1 - p0^2 - p1^2) of a 0/1 label vector.
// Throws DataError on empty input or a non-binary label.
double gini(std::span<const int> labels);

struct Split {
  std::size_t feature = 0;
  double threshold = 0.0;
  double gain = 0.0;

  friend bool operator==(const Split&, const Split&) = default;
};

// Best axis-aligned split of all rows of X over `candidate_features`.
// Thresholds are midpoints between consecutive distinct values; gain is
// gini (classification) or variance (regression) reduction. Ties go to the
// lowest feature index, then the lowest threshold. nullopt when no split has
// positive gain.
std::optional<Split> best_split(const FeatureMatrix& X,
                                std::span<const double> y,
                                std::span<const std::size_t> candidate_features,
                                TreeTask task);

// Recursive CART. Stops at max_depth, below min_samples_split, on a pure
// node, or when no split gains. Per-node feature subsets are drawn from
// `rng` without replacement. Classification targets must be 0 or 1.
DecisionTree train_decision_tree(const FeatureMatrix& X,
                                 std::span<const double> y,
                                 const TreeConfig& config, Rng& rng);

inline double predict_tree(const DecisionTree& tree,
                           std::span<const double> x) {
  return tree.predict(x);
}

}  // namespace sdm

#endif  // SDM_DECISION_TREE_H_
