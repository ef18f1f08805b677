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

#ifndef SDM_ENSEMBLE_H_
#define SDM_ENSEMBLE_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "sdm/decision_tree.h"
#include "sdm/matrix.h"
#include "sdm/random.h"

namespace sdm {

inline constexpr double kDefaultThreshold = 0.5;

struct RandomForestParams {
  std::size_t num_trees = 100;
  // max_features left unset here resolves to ceil(sqrt(arity)) at training
  // time; see resolve_forest_config.
  TreeConfig tree{10, 2, std::nullopt, TreeTask::kClassification};
};

struct GradientBoostingParams {
  std::size_t num_trees = 100;
  double eta = 0.1;
  TreeConfig tree{3, 2, std::nullopt, TreeTask::kRegression};
};

// Tree config actually used by the forest: classification task and, when
// max_features is unset, ceil(sqrt(arity)) features per node.
TreeConfig resolve_forest_config(const TreeConfig& config, std::size_t arity);

struct RandomForestModel {
  std::string species;
  std::vector<std::string> feature_names;
  std::uint64_t seed = 0;
  TreeConfig config;
  std::vector<DecisionTree> trees;
};

struct GradientBoostingModel {
  std::string species;
  std::vector<std::string> feature_names;
  std::uint64_t seed = 0;
  TreeConfig config;
  double f0 = 0.0;
  double eta = 0.1;
  std::vector<DecisionTree> trees;
};

using Model = std::variant<RandomForestModel, GradientBoostingModel>;

struct Prediction {
  std::vector<int> labels;
  std::vector<double> probabilities;
};

struct FeatureImportance {
  std::vector<std::string> feature_names;
  std::vector<double> weights;  // parallel to feature_names
  bool has_splits = false;

  double weight(std::string_view name) const;
};

// n draws with replacement from [0, n).
std::vector<std::size_t> bootstrap_indices(std::size_t n, Rng& rng);

// Tree i is grown on a bootstrap sample drawn from make_rng(seed, i), and the
// same generator then drives its per-node feature draws, so the result does
// not depend on `threads` (0 = hardware concurrency). Throws DataError when
// y holds a single class.
RandomForestModel train_random_forest(const FeatureMatrix& X,
                                      std::span<const double> y,
                                      const RandomForestParams& params,
                                      std::uint64_t seed,
                                      std::size_t threads = 1);

// Mean of per-tree probabilities, thresholded with `p >= theta`.
Prediction predict_random_forest(const RandomForestModel& model,
                                 const FeatureMatrix& X,
                                 double theta = kDefaultThreshold);

// L2 boosting on 0/1 targets: f0 = mean(y), then each tree fits the
// residuals y - F_{t-1} and F_t = F_{t-1} + eta * h_t.
GradientBoostingModel train_gbt(const FeatureMatrix& X,
                                std::span<const double> y,
                                const GradientBoostingParams& params,
                                std::uint64_t seed);

// Unclamped F_k(x) for the first `stages` trees (all when nullopt).
std::vector<double> gbt_raw_scores(const GradientBoostingModel& model,
                                   const FeatureMatrix& X,
                                   std::optional<std::size_t> stages = {});

// Scores clamped to [0, 1], thresholded with `p >= theta`.
Prediction predict_gbt(const GradientBoostingModel& model,
                       const FeatureMatrix& X,
                       double theta = kDefaultThreshold);

Prediction predict(const Model& model, const FeatureMatrix& X,
                   double theta = kDefaultThreshold);

const std::vector<std::string>& feature_names(const Model& model);
std::string_view model_type_name(const Model& model);

// Mean decrease in impurity: each split adds (n_node / n_root) times its
// impurity decrease to its feature; totals are normalised to sum to 1. A
// model without splits yields all zeros.
FeatureImportance feature_importance(const Model& model);

}  // namespace sdm

#endif  // SDM_ENSEMBLE_H_
