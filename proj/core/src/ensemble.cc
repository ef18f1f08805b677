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

#include "sdm/ensemble.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <random>
#include <thread>

#include "sdm/error.h"

namespace sdm {

namespace {

void check_arity(const FeatureMatrix& X, std::size_t expected) {
  if (X.cols() != expected) {
    throw ConfigError("input has " + std::to_string(X.cols()) +
                      " features, model expects " + std::to_string(expected));
  }
}

void check_rows(const FeatureMatrix& X, std::span<const double> y) {
  if (X.rows() != y.size()) {
    throw ConfigError("feature matrix has " + std::to_string(X.rows()) +
                      " rows but target vector has " + std::to_string(y.size()));
  }
}

std::vector<std::string> default_names(std::size_t arity) {
  std::vector<std::string> names;
  for (std::size_t i = 0; i < arity; ++i) names.push_back("x" + std::to_string(i));
  return names;
}

std::vector<int> threshold(std::span<const double> probs, double theta) {
  std::vector<int> labels(probs.size());
  for (std::size_t i = 0; i < probs.size(); ++i) {
    labels[i] = probs[i] >= theta ? 1 : 0;
  }
  return labels;
}

// Runs body(i) for i in [0, count) on up to `threads` workers. Rethrows the
// first exception after all workers have joined.
template <typename Body>
void parallel_for(std::size_t count, std::size_t threads, Body body) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min(threads, count);
  if (threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> workers;
  workers.reserve(threads);
  for (std::size_t w = 0; w < threads; ++w) {
    workers.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) {
        try {
          body(i);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!error) error = std::current_exception();
          next = count;
        }
      }
    });
  }
  for (auto& w : workers) w.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace

double FeatureImportance::weight(std::string_view name) const {
  for (std::size_t i = 0; i < feature_names.size(); ++i) {
    if (feature_names[i] == name) return weights[i];
  }
  throw ConfigError("unknown feature '" + std::string(name) + "'");
}

TreeConfig resolve_forest_config(const TreeConfig& config, std::size_t arity) {
  TreeConfig resolved = config;
  resolved.task = TreeTask::kClassification;
  if (!resolved.max_features) {
    resolved.max_features = static_cast<std::size_t>(
        std::ceil(std::sqrt(static_cast<double>(arity))));
  }
  return resolved;
}

std::vector<std::size_t> bootstrap_indices(std::size_t n, Rng& rng) {
  std::vector<std::size_t> idx(n);
  if (n == 0) return idx;
  std::uniform_int_distribution<std::size_t> pick(0, n - 1);
  for (auto& i : idx) i = pick(rng);
  return idx;
}

RandomForestModel train_random_forest(const FeatureMatrix& X,
                                      std::span<const double> y,
                                      const RandomForestParams& params,
                                      std::uint64_t seed, std::size_t threads) {
  check_rows(X, y);
  if (y.size() < 2) throw DataError("random forest needs at least 2 rows");
  std::size_t positives = 0;
  for (const double v : y) {
    if (v != 0.0 && v != 1.0) throw DataError("labels must be 0 or 1");
    positives += v == 1.0 ? 1 : 0;
  }
  if (positives == 0 || positives == y.size()) {
    throw DataError("random forest needs both classes in the training labels");
  }
  if (params.num_trees < 1) throw ConfigError("num_trees must be >= 1");

  RandomForestModel model;
  model.feature_names = default_names(X.cols());
  model.seed = seed;
  model.config = resolve_forest_config(params.tree, X.cols());
  model.config.validate(X.cols());

  std::vector<std::optional<DecisionTree>> slots(params.num_trees);
  parallel_for(params.num_trees, threads, [&](std::size_t i) {
    Rng rng = make_rng(seed, i);
    const auto rows = bootstrap_indices(X.rows(), rng);
    const FeatureMatrix Xb = X.select_rows(rows);
    std::vector<double> yb(rows.size());
    for (std::size_t k = 0; k < rows.size(); ++k) yb[k] = y[rows[k]];
    slots[i] = train_decision_tree(Xb, yb, model.config, rng);
  });
  model.trees.reserve(slots.size());
  for (auto& t : slots) model.trees.push_back(std::move(*t));
  return model;
}

Prediction predict_random_forest(const RandomForestModel& model,
                                 const FeatureMatrix& X, double theta) {
  check_arity(X, model.feature_names.size());
  if (model.trees.empty()) throw ConfigError("random forest has no trees");
  Prediction out;
  out.probabilities.resize(X.rows());
  const auto count = static_cast<double>(model.trees.size());
  for (std::size_t r = 0; r < X.rows(); ++r) {
    const auto x = X.row(r);
    double sum = 0.0;
    for (const auto& tree : model.trees) sum += tree.predict_unchecked(x);
    out.probabilities[r] = sum / count;
  }
  out.labels = threshold(out.probabilities, theta);
  return out;
}

GradientBoostingModel train_gbt(const FeatureMatrix& X,
                                std::span<const double> y,
                                const GradientBoostingParams& params,
                                std::uint64_t seed) {
  check_rows(X, y);
  if (y.size() < 2) throw DataError("gradient boosting needs at least 2 rows");
  if (!(params.eta > 0.0) || !std::isfinite(params.eta)) {
    throw ConfigError("learning rate must be positive");
  }
  GradientBoostingModel model;
  model.feature_names = default_names(X.cols());
  model.seed = seed;
  model.eta = params.eta;
  model.config = params.tree;
  model.config.task = TreeTask::kRegression;
  model.config.validate(X.cols());

  double total = 0.0;
  for (const double v : y) total += v;
  model.f0 = total / static_cast<double>(y.size());

  std::vector<double> scores(y.size(), model.f0);
  std::vector<double> residuals(y.size());
  model.trees.reserve(params.num_trees);
  for (std::size_t t = 0; t < params.num_trees; ++t) {
    for (std::size_t i = 0; i < y.size(); ++i) residuals[i] = y[i] - scores[i];
    Rng rng = make_rng(seed, t);
    DecisionTree tree = train_decision_tree(X, residuals, model.config, rng);
    for (std::size_t i = 0; i < y.size(); ++i) {
      scores[i] += model.eta * tree.predict_unchecked(X.row(i));
    }
    model.trees.push_back(std::move(tree));
  }
  return model;
}

std::vector<double> gbt_raw_scores(const GradientBoostingModel& model,
                                   const FeatureMatrix& X,
                                   std::optional<std::size_t> stages) {
  check_arity(X, model.feature_names.size());
  const std::size_t used = std::min(stages.value_or(model.trees.size()),
                                    model.trees.size());
  std::vector<double> raw(X.rows(), model.f0);
  for (std::size_t r = 0; r < X.rows(); ++r) {
    const auto x = X.row(r);
    // Same accumulation order as training.
    for (std::size_t t = 0; t < used; ++t) {
      raw[r] += model.eta * model.trees[t].predict_unchecked(x);
    }
  }
  return raw;
}

Prediction predict_gbt(const GradientBoostingModel& model,
                       const FeatureMatrix& X, double theta) {
  Prediction out;
  out.probabilities = gbt_raw_scores(model, X);
  for (double& p : out.probabilities) p = std::clamp(p, 0.0, 1.0);
  out.labels = threshold(out.probabilities, theta);
  return out;
}

Prediction predict(const Model& model, const FeatureMatrix& X, double theta) {
  return std::visit(
      [&](const auto& m) -> Prediction {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, RandomForestModel>) {
          return predict_random_forest(m, X, theta);
        } else {
          return predict_gbt(m, X, theta);
        }
      },
      model);
}

const std::vector<std::string>& feature_names(const Model& model) {
  return std::visit(
      [](const auto& m) -> const std::vector<std::string>& {
        return m.feature_names;
      },
      model);
}

std::string_view model_type_name(const Model& model) {
  return std::holds_alternative<RandomForestModel>(model) ? "random_forest"
                                                          : "gradient_boosting";
}

FeatureImportance feature_importance(const Model& model) {
  FeatureImportance out;
  const auto& trees =
      std::visit([](const auto& m) -> const std::vector<DecisionTree>& {
        return m.trees;
      }, model);
  out.feature_names = feature_names(model);
  out.weights.assign(out.feature_names.size(), 0.0);
  for (const auto& tree : trees) {
    const auto root_n = static_cast<double>(tree.root().n);
    for (const auto& node : tree.nodes()) {
      if (node.is_leaf()) continue;
      out.has_splits = true;
      out.weights[static_cast<std::size_t>(node.feature)] +=
          static_cast<double>(node.n) / root_n * node.impurity_decrease;
    }
  }
  double total = 0.0;
  for (const double w : out.weights) total += w;
  if (out.has_splits && total > 0.0) {
    for (double& w : out.weights) w /= total;
  }
  return out;
}

}  // namespace sdm
