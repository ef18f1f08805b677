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

#include <gtest/gtest.h>

#include <algorithm>
#include <map>
#include <random>

#include "sdm/error.h"

namespace sdm {
namespace {

FeatureMatrix column(std::vector<double> v) {
  const std::size_t n = v.size();
  return FeatureMatrix(n, 1, std::move(v));
}

TreeConfig cls(std::size_t depth, std::size_t min_split,
               std::optional<std::size_t> features = std::nullopt) {
  return TreeConfig{depth, min_split, features, TreeTask::kClassification};
}

TEST(Gini, Examples) {
  EXPECT_DOUBLE_EQ(gini(std::vector<int>{1, 1, 0, 0}), 0.5);
  EXPECT_DOUBLE_EQ(gini(std::vector<int>{1, 1, 1}), 0.0);
  EXPECT_DOUBLE_EQ(gini(std::vector<int>{1, 0, 0, 0}), 1.0 - 0.25 * 0.25 - 0.75 * 0.75);
  EXPECT_THROW(gini(std::vector<int>{}), DataError);
  EXPECT_THROW(gini(std::vector<int>{2}), DataError);
}

TEST(GiniProperty, PermutationInvariantAndBounded) {
  std::mt19937_64 rng(4);
  for (int t = 0; t < 500; ++t) {
    std::vector<int> y(1 + rng() % 40);
    for (auto& v : y) v = static_cast<int>(rng() % 2);
    const double g = gini(y);
    ASSERT_GE(g, 0.0);
    ASSERT_LE(g, 0.5);
    std::shuffle(y.begin(), y.end(), rng);
    ASSERT_EQ(gini(y), g);
  }
}

TEST(BestSplit, SeparableColumn) {
  const auto X = column({0, 1, 2, 3});
  const std::vector<double> y{0, 0, 1, 1};
  const std::vector<std::size_t> features{0};
  const auto s = best_split(X, y, features, TreeTask::kClassification);
  ASSERT_TRUE(s);
  EXPECT_EQ(s->feature, 0u);
  EXPECT_EQ(s->threshold, 1.5);
  EXPECT_DOUBLE_EQ(s->gain, 0.5);
}

TEST(BestSplit, PureNodeHasNoSplit) {
  const auto X = column({0, 1, 2, 3});
  const std::vector<double> y{1, 1, 1, 1};
  const std::vector<std::size_t> features{0};
  EXPECT_FALSE(best_split(X, y, features, TreeTask::kClassification));
  EXPECT_FALSE(best_split(X, y, features, TreeTask::kRegression));
}

TEST(BestSplit, ConstantFeatureHasNoSplit) {
  const auto X = column({2, 2, 2, 2});
  const std::vector<double> y{0, 1, 0, 1};
  const std::vector<std::size_t> features{0};
  EXPECT_FALSE(best_split(X, y, features, TreeTask::kClassification));
}

TEST(BestSplit, TieGoesToLowerFeatureIndex) {
  // Columns 0 and 2 are identical; column 1 is noise.
  const auto X = FeatureMatrix::from_rows(
      {{0, 5, 0}, {1, 4, 1}, {2, 5, 2}, {3, 4, 3}});
  const std::vector<double> y{0, 0, 1, 1};
  const std::vector<std::size_t> features{2, 1, 0};
  const auto s = best_split(X, y, features, TreeTask::kClassification);
  ASSERT_TRUE(s);
  EXPECT_EQ(s->feature, 0u);
  const std::vector<std::size_t> only_high{2, 1};
  EXPECT_EQ(best_split(X, y, only_high, TreeTask::kClassification)->feature, 2u);
}

TEST(BestSplit, TieGoesToLowerThreshold) {
  // Splitting at 0.5 or 2.5 both isolate one minority row: equal gain.
  const auto X = column({0, 1, 2, 3});
  const std::vector<double> y{1, 0, 0, 1};
  const std::vector<std::size_t> features{0};
  const auto s = best_split(X, y, features, TreeTask::kClassification);
  ASSERT_TRUE(s);
  EXPECT_EQ(s->threshold, 0.5);
}

TEST(BestSplit, RegressionVarianceReduction) {
  const auto X = column({0, 1, 2, 3});
  const std::vector<double> y{1, 1, 5, 5};
  const std::vector<std::size_t> features{0};
  const auto s = best_split(X, y, features, TreeTask::kRegression);
  ASSERT_TRUE(s);
  EXPECT_EQ(s->threshold, 1.5);
  EXPECT_DOUBLE_EQ(s->gain, 4.0);  // parent variance 4, children 0
}

// Exhaustive oracle: try every midpoint threshold on every feature and
// compute impurities from scratch.
std::optional<Split> brute_force_split(const FeatureMatrix& X,
                                       const std::vector<double>& y,
                                       TreeTask task) {
  const auto impurity = [&](const std::vector<double>& t) {
    const double n = static_cast<double>(t.size());
    double mean = 0;
    for (double v : t) mean += v / n;
    if (task == TreeTask::kClassification) return 1.0 - mean * mean - (1 - mean) * (1 - mean);
    double var = 0;
    for (double v : t) var += (v - mean) * (v - mean) / n;
    return var;
  };
  const double parent = impurity(y);
  std::optional<Split> best;
  for (std::size_t f = 0; f < X.cols(); ++f) {
    std::vector<double> vals;
    for (std::size_t r = 0; r < X.rows(); ++r) vals.push_back(X(r, f));
    std::sort(vals.begin(), vals.end());
    vals.erase(std::unique(vals.begin(), vals.end()), vals.end());
    for (std::size_t k = 0; k + 1 < vals.size(); ++k) {
      const double thr = (vals[k] + vals[k + 1]) / 2;
      std::vector<double> l, r;
      for (std::size_t i = 0; i < X.rows(); ++i) (X(i, f) < thr ? l : r).push_back(y[i]);
      const double n = static_cast<double>(y.size());
      const double gain = parent - (l.size() / n) * impurity(l) - (r.size() / n) * impurity(r);
      if (gain > 1e-9 && (!best || gain > best->gain + 1e-9)) best = Split{f, thr, gain};
    }
  }
  return best;
}

TEST(BestSplitProperty, MatchesExhaustiveSearch) {
  std::mt19937_64 rng(8);
  for (const auto task : {TreeTask::kClassification, TreeTask::kRegression}) {
    for (int trial = 0; trial < 300; ++trial) {
      const std::size_t n = 2 + rng() % 25;
      const std::size_t d = 1 + rng() % 4;
      FeatureMatrix X(n, d);
      std::vector<double> y(n);
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < d; ++j) X(i, j) = static_cast<double>(rng() % 6);
        y[i] = task == TreeTask::kClassification ? static_cast<double>(rng() % 2)
                                                 : static_cast<double>(rng() % 100) / 10;
      }
      std::vector<std::size_t> features(d);
      std::iota(features.begin(), features.end(), std::size_t{0});
      const auto got = best_split(X, y, features, task);
      const auto want = brute_force_split(X, y, task);
      ASSERT_EQ(got.has_value(), want.has_value()) << "trial " << trial;
      if (got) ASSERT_NEAR(got->gain, want->gain, 1e-9) << "trial " << trial;
    }
  }
}

TEST(TrainDecisionTree, Singleton) {
  Rng rng(1);
  const auto tree = train_decision_tree(column({3}), std::vector<double>{1},
                                        cls(10, 2), rng);
  ASSERT_EQ(tree.nodes().size(), 1u);
  EXPECT_TRUE(tree.root().is_leaf());
  EXPECT_EQ(tree.root().value, 1.0);
  EXPECT_EQ(tree.root().n, 1u);
}

TEST(TrainDecisionTree, SingleOptimalSplit) {
  Rng rng(1);
  const auto tree = train_decision_tree(column({0, 1, 2, 3}),
                                        std::vector<double>{0, 0, 1, 1},
                                        cls(2, 2), rng);
  ASSERT_EQ(tree.nodes().size(), 3u);
  const auto& root = tree.root();
  EXPECT_EQ(root.feature, 0);
  EXPECT_EQ(root.threshold, 1.5);
  EXPECT_EQ(root.n, 4u);
  EXPECT_DOUBLE_EQ(root.impurity_decrease, 0.5);
  const auto& left = tree.nodes()[static_cast<std::size_t>(root.left)];
  const auto& right = tree.nodes()[static_cast<std::size_t>(root.right)];
  EXPECT_TRUE(left.is_leaf());
  EXPECT_TRUE(right.is_leaf());
  EXPECT_EQ(left.value, 0.0);
  EXPECT_EQ(right.value, 1.0);

  EXPECT_EQ(predict_tree(tree, std::vector<double>{0.2}), 0.0);
  // x == threshold routes right under the strict `<` rule.
  EXPECT_EQ(predict_tree(tree, std::vector<double>{1.5}), 1.0);
}

TEST(TrainDecisionTree, MinSamplesStop) {
  Rng rng(1);
  const auto tree = train_decision_tree(column({0, 1, 2, 3}),
                                        std::vector<double>{0, 0, 1, 1},
                                        cls(2, 5), rng);
  ASSERT_EQ(tree.nodes().size(), 1u);
  EXPECT_EQ(tree.root().value, 0.5);
}

TEST(TrainDecisionTree, PureNodeIsLeaf) {
  Rng rng(1);
  const auto tree = train_decision_tree(column({0, 1, 2, 3}),
                                        std::vector<double>{1, 1, 1, 1},
                                        cls(5, 2), rng);
  ASSERT_EQ(tree.nodes().size(), 1u);
  EXPECT_EQ(tree.root().value, 1.0);
}

TEST(TrainDecisionTree, ConfigAndShapeErrors) {
  Rng rng(1);
  const std::vector<double> y{0, 1};
  EXPECT_THROW(train_decision_tree(column({0, 1, 2}), y, cls(2, 2), rng), ConfigError);
  EXPECT_THROW(train_decision_tree(column({0, 1}), y, cls(0, 2), rng), ConfigError);
  EXPECT_THROW(train_decision_tree(column({0, 1}), y, cls(2, 1), rng), ConfigError);
  EXPECT_THROW(train_decision_tree(column({0, 1}), y, cls(2, 2, 2), rng), ConfigError);
  EXPECT_THROW(train_decision_tree(column({0, 1}), y, cls(2, 2, 0), rng), ConfigError);
  EXPECT_THROW(train_decision_tree(column({0, 1}), std::vector<double>{0, 0.5},
                                   cls(2, 2), rng),
               DataError);
  EXPECT_THROW(train_decision_tree(FeatureMatrix(0, 1), std::vector<double>{},
                                   cls(2, 2), rng),
               DataError);
}

TEST(PredictTree, LeafAndArity) {
  const auto tree = DecisionTree::from_nodes({TreeNode{TreeNode::kLeaf, 0, -1, -1, 0.7, 3, 0}}, 2);
  EXPECT_EQ(tree.predict(std::vector<double>{1, 2}), 0.7);
  EXPECT_EQ(tree.predict(std::vector<double>{-5, 9}), 0.7);
  EXPECT_THROW(tree.predict(std::vector<double>{1}), ConfigError);
}

TEST(FromNodes, RejectsMalformedTrees) {
  const TreeNode leaf{TreeNode::kLeaf, 0, -1, -1, 0.5, 1, 0};
  TreeNode split{0, 1.0, 1, 2, 0.5, 2, 0.1};
  EXPECT_NO_THROW(DecisionTree::from_nodes({split, leaf, leaf}, 1));
  EXPECT_THROW(DecisionTree::from_nodes({}, 1), ConfigError);
  EXPECT_THROW(DecisionTree::from_nodes({split, leaf}, 1), ConfigError);
  EXPECT_THROW(DecisionTree::from_nodes({split, leaf, leaf}, 0), ConfigError);
  EXPECT_THROW(DecisionTree::from_nodes({split, leaf, leaf, leaf}, 1), ConfigError);
  split.left = 0;
  EXPECT_THROW(DecisionTree::from_nodes({split, leaf, leaf}, 1), ConfigError);
  split.left = 1;
  split.right = 1;
  EXPECT_THROW(DecisionTree::from_nodes({split, leaf, leaf}, 1), ConfigError);
}

struct RandomData {
  FeatureMatrix X;
  std::vector<double> y;
};

// Distinct rows (no duplicate x with conflicting labels).
RandomData random_data(std::mt19937_64& rng, std::size_t n, std::size_t d,
                       TreeTask task) {
  RandomData out{FeatureMatrix(n, d), std::vector<double>(n)};
  std::normal_distribution<double> noise(0, 1);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < d; ++j) out.X(i, j) = noise(rng);
    out.y[i] = task == TreeTask::kClassification
                   ? (out.X(i, 0) + 0.5 * noise(rng) > 0 ? 1.0 : 0.0)
                   : out.X(i, 0) * 2 + noise(rng);
  }
  return out;
}

TEST(TreeProperty, UnrestrictedTreeFitsTrainingSet) {
  std::mt19937_64 gen(10);
  for (int trial = 0; trial < 30; ++trial) {
    const auto data = random_data(gen, 20 + gen() % 100, 1 + gen() % 5,
                                  TreeTask::kClassification);
    Rng rng(trial);
    const auto tree = train_decision_tree(data.X, data.y, cls(1000, 2), rng);
    for (std::size_t i = 0; i < data.X.rows(); ++i) {
      ASSERT_EQ(tree.predict(data.X.row(i)), data.y[i]);
    }
  }
}

TEST(TreeProperty, LeafValuesMatchRoutedRowsAndDepthBound) {
  std::mt19937_64 gen(12);
  for (const auto task : {TreeTask::kClassification, TreeTask::kRegression}) {
    for (int trial = 0; trial < 30; ++trial) {
      const std::size_t d = 1 + gen() % 5;
      const auto data = random_data(gen, 10 + gen() % 150, d, task);
      const TreeConfig config{1 + gen() % 6, 2 + gen() % 5, 1 + gen() % d, task};
      Rng rng(gen());
      const auto tree = train_decision_tree(data.X, data.y, config, rng);
      ASSERT_LE(tree.depth(), config.max_depth);

      std::map<const TreeNode*, std::vector<double>> routed;
      for (std::size_t i = 0; i < data.X.rows(); ++i) {
        const TreeNode* node = &tree.nodes()[0];
        while (!node->is_leaf()) {
          node = &tree.nodes()[static_cast<std::size_t>(
              data.X(i, static_cast<std::size_t>(node->feature)) < node->threshold
                  ? node->left
                  : node->right)];
        }
        routed[node].push_back(data.y[i]);
      }
      for (const auto& node : tree.nodes()) {
        if (!node.is_leaf()) continue;
        const auto& ys = routed.at(&node);
        ASSERT_EQ(ys.size(), node.n);
        double mean = 0;
        for (double v : ys) mean += v;
        mean /= static_cast<double>(ys.size());
        ASSERT_NEAR(node.value, mean, 1e-12);
        if (task == TreeTask::kClassification) {
          ASSERT_GE(node.value, 0.0);
          ASSERT_LE(node.value, 1.0);
        }
      }
    }
  }
}

TEST(TreeProperty, DeterministicGivenSeed) {
  std::mt19937_64 gen(14);
  const auto data = random_data(gen, 200, 5, TreeTask::kClassification);
  Rng a(77), b(77), c(78);
  const auto config = cls(8, 2, 2);
  const auto ta = train_decision_tree(data.X, data.y, config, a);
  EXPECT_EQ(ta, train_decision_tree(data.X, data.y, config, b));
  EXPECT_NE(ta, train_decision_tree(data.X, data.y, config, c));
}

}  // namespace
}  // namespace sdm
