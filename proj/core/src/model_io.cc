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

#include "sdm/model_io.h"

#include "json.hpp"
#include "sdm/error.h"
#include "sdm/text.h"

namespace sdm {

namespace {

using Json = nlohmann::ordered_json;

Json tree_to_json(const DecisionTree& tree) {
  Json nodes = Json::array();
  for (const auto& node : tree.nodes()) {
    Json j;
    if (node.is_leaf()) {
      j["kind"] = "leaf";
      j["value"] = node.value;
      j["n"] = node.n;
    } else {
      j["kind"] = "split";
      j["feature"] = node.feature;
      j["threshold"] = node.threshold;
      j["left"] = node.left;
      j["right"] = node.right;
      j["value"] = node.value;
      j["n"] = node.n;
      j["impurity_decrease"] = node.impurity_decrease;
    }
    nodes.push_back(std::move(j));
  }
  Json out;
  out["nodes"] = std::move(nodes);
  return out;
}

DecisionTree tree_from_json(const Json& j, std::size_t arity) {
  std::vector<TreeNode> nodes;
  for (const auto& jn : j.at("nodes")) {
    TreeNode node;
    const auto kind = jn.at("kind").get<std::string>();
    node.value = jn.at("value").get<double>();
    node.n = jn.at("n").get<std::size_t>();
    if (kind == "split") {
      node.feature = jn.at("feature").get<std::int32_t>();
      node.threshold = jn.at("threshold").get<double>();
      node.left = jn.at("left").get<std::int32_t>();
      node.right = jn.at("right").get<std::int32_t>();
      node.impurity_decrease = jn.at("impurity_decrease").get<double>();
      if (node.feature < 0) throw ConfigError("split node with negative feature");
    } else if (kind != "leaf") {
      throw ConfigError("unknown node kind '" + kind + "'");
    }
    nodes.push_back(node);
  }
  return DecisionTree::from_nodes(std::move(nodes), arity);
}

Json hyperparameters(std::size_t num_trees, const TreeConfig& config) {
  Json h;
  h["num_trees"] = num_trees;
  h["max_depth"] = config.max_depth;
  h["min_samples_split"] = config.min_samples_split;
  if (config.max_features) {
    h["max_features"] = *config.max_features;
  } else {
    h["max_features"] = "all";
  }
  return h;
}

TreeConfig config_from_json(const Json& h, TreeTask task) {
  TreeConfig config;
  config.task = task;
  config.max_depth = h.at("max_depth").get<std::size_t>();
  config.min_samples_split = h.at("min_samples_split").get<std::size_t>();
  const auto& mf = h.at("max_features");
  if (mf.is_string()) {
    if (mf.get<std::string>() != "all") {
      throw ConfigError("max_features must be an integer or \"all\"");
    }
  } else {
    config.max_features = mf.get<std::size_t>();
  }
  return config;
}

template <typename M>
Json envelope(const M& m, std::string_view type) {
  Json j;
  j["model_type"] = type;
  j["species"] = m.species;
  j["feature_names"] = m.feature_names;
  j["seed"] = m.seed;
  return j;
}

}  // namespace

std::string model_to_json(const Model& model) {
  Json j;
  if (const auto* rf = std::get_if<RandomForestModel>(&model)) {
    j = envelope(*rf, "random_forest");
    j["hyperparameters"] = hyperparameters(rf->trees.size(), rf->config);
    Json trees = Json::array();
    for (const auto& t : rf->trees) trees.push_back(tree_to_json(t));
    j["trees"] = std::move(trees);
  } else {
    const auto& gbt = std::get<GradientBoostingModel>(model);
    j = envelope(gbt, "gradient_boosting");
    Json h = hyperparameters(gbt.trees.size(), gbt.config);
    h["learning_rate"] = gbt.eta;
    j["hyperparameters"] = std::move(h);
    j["f0"] = gbt.f0;
    Json trees = Json::array();
    for (const auto& t : gbt.trees) trees.push_back(tree_to_json(t));
    j["trees"] = std::move(trees);
  }
  return j.dump(2) + "\n";
}

Model model_from_json(std::string_view text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ParseError(0, std::string("model JSON: ") + e.what());
  }
  try {
    const auto type = j.at("model_type").get<std::string>();
    const auto names = j.at("feature_names").get<std::vector<std::string>>();
    if (names.empty()) throw ConfigError("model has no feature names");
    const auto species = j.value("species", std::string{});
    const auto seed = j.at("seed").get<std::uint64_t>();
    const auto& h = j.at("hyperparameters");
    const auto num_trees = h.at("num_trees").get<std::size_t>();
    const auto& jtrees = j.at("trees");
    if (jtrees.size() != num_trees) {
      throw ConfigError("num_trees is " + std::to_string(num_trees) +
                        " but the model lists " +
                        std::to_string(jtrees.size()) + " trees");
    }
    std::vector<DecisionTree> trees;
    trees.reserve(jtrees.size());
    for (const auto& jt : jtrees) trees.push_back(tree_from_json(jt, names.size()));

    if (type == "random_forest") {
      RandomForestModel rf;
      rf.species = species;
      rf.feature_names = names;
      rf.seed = seed;
      rf.config = config_from_json(h, TreeTask::kClassification);
      rf.trees = std::move(trees);
      if (rf.trees.empty()) throw ConfigError("random forest has no trees");
      return rf;
    }
    if (type == "gradient_boosting") {
      GradientBoostingModel gbt;
      gbt.species = species;
      gbt.feature_names = names;
      gbt.seed = seed;
      gbt.config = config_from_json(h, TreeTask::kRegression);
      gbt.eta = h.at("learning_rate").get<double>();
      if (!(gbt.eta > 0.0)) throw ConfigError("learning_rate must be positive");
      gbt.f0 = j.at("f0").get<double>();
      gbt.trees = std::move(trees);
      return gbt;
    }
    throw ConfigError("unknown model_type '" + type + "'");
  } catch (const Json::exception& e) {
    throw ConfigError(std::string("invalid model document: ") + e.what());
  }
}

void save_model(const Model& model, const std::filesystem::path& path) {
  text::write_file(path, model_to_json(model));
}

Model load_model(const std::filesystem::path& path) {
  return model_from_json(text::read_file(path));
}

}  // namespace sdm
