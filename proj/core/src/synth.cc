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

#include "sdm/synth.h"

#include <cmath>
#include <random>

#include "sdm/error.h"
#include "sdm/random.h"

namespace sdm {

Dataset make_synthetic_clusters(std::size_t n, double separation,
                                std::uint64_t seed) {
  if (n < 2) throw ConfigError("synthetic dataset needs at least 2 rows");
  if (!std::isfinite(separation)) throw ConfigError("separation must be finite");

  Dataset out;
  out.species = "synthetic";
  out.feature_names = pipeline_feature_names();
  const std::size_t arity = out.feature_names.size();
  const std::size_t positives = (n + 1) / 2;

  Rng rng(stream_seed(seed, 0));
  std::normal_distribution<double> noise(0.0, 1.0);
  out.samples.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    Sample s;
    s.label = i < positives ? 1 : 0;
    const double mean = s.label == 1 ? separation : 0.0;
    s.features.resize(arity);
    for (auto& v : s.features) v = mean + noise(rng);
    out.samples.push_back(std::move(s));
  }
  return out;
}

}  // namespace sdm
