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

#ifndef SDM_SYNTH_H_
#define SDM_SYNTH_H_

#include <cstddef>
#include <cstdint>

#include "sdm/data_pipeline.h"

namespace sdm {

// Two isotropic unit-variance Gaussian clusters in the five pipeline
// features. Class 0 is centred at the origin and class 1 at `separation` on
// every axis. Class 1 gets ceil(n / 2) rows and comes first.
Dataset make_synthetic_clusters(std::size_t n, double separation,
                                std::uint64_t seed);

}  // namespace sdm

#endif  // SDM_SYNTH_H_
