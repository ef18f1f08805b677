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

#ifndef SDM_MODEL_IO_H_
#define SDM_MODEL_IO_H_

// Model files are JSON documents with a fixed key order:
//
//   {
//     "model_type": "random_forest" | "gradient_boosting",
//     "species": "...",
//     "feature_names": [...],
//     "seed": <uint64>,
//     "hyperparameters": {"num_trees", "max_depth", "min_samples_split",
//                         "max_features" (integer or "all"),
//                         "learning_rate" (boosting only)},
//     "f0": <number>                       (boosting only),
//     "trees": [{"nodes": [...]}, ...]
//   }
//
// Nodes are listed in pre-order with the root first. A leaf is
// {"kind": "leaf", "value", "n"}; a split is {"kind": "split", "feature",
// "threshold", "left", "right", "value", "n", "impurity_decrease"} where
// left/right index into the same node list. Numbers are written in
// shortest round-trip form, so a save/load cycle reproduces every double.

#include <filesystem>
#include <string>
#include <string_view>

#include "sdm/ensemble.h"

namespace sdm {

std::string model_to_json(const Model& model);

// Throws ParseError on malformed JSON and ConfigError on a document that
// does not describe a valid model.
Model model_from_json(std::string_view json);

void save_model(const Model& model, const std::filesystem::path& path);
Model load_model(const std::filesystem::path& path);

}  // namespace sdm

#endif  // SDM_MODEL_IO_H_
