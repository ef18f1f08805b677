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

#ifndef SDM_TOOLS_COMMANDS_H_
#define SDM_TOOLS_COMMANDS_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "sdm/data_pipeline.h"
#include "sdm/ensemble.h"
#include "sdm/geo_raster.h"

namespace sdm::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 2,  // bad flags, missing files, schema mismatches
  kExitData = 3,   // malformed or insufficient data
};

// Stream indices under the master --seed for each ingest stage.
inline constexpr std::uint64_t kAbsenceStream = 1;
inline constexpr std::uint64_t kBalanceStream = 2;
inline constexpr std::uint64_t kSplitStream = 3;

struct IngestOptions {
  std::filesystem::path observations;
  std::string species;
  std::filesystem::path elevation;
  std::filesystem::path precipitation;
  std::filesystem::path temperature;
  std::uint64_t seed = 0;
  std::size_t per_class = kDefaultPerClass;
  // Candidates generated before the nodata filter; 0 selects 2 * per_class.
  std::size_t absences = 0;
  double min_dist_km = kPseudoAbsenceMinDistanceKm;
  std::optional<BoundingBox> region;
  double region_margin_deg = kDefaultRegionMarginDeg;
  std::size_t max_attempts = 0;
};

struct IngestResult {
  Dataset balanced;
  SplitDataset split;
  std::size_t presences = 0;
  std::size_t dropped = 0;
  BoundingBox region;
};

FeatureRasters load_feature_rasters(const std::filesystem::path& elevation,
                                    const std::filesystem::path& precipitation,
                                    const std::filesystem::path& temperature);

// parse -> pseudo-absences -> assemble -> balance -> split, with each stage
// seeded from stream_seed(options.seed, k<Stage>Stream).
IngestResult ingest_pipeline(const IngestOptions& options);

// Runs the `sdm` command line. `args[0]` is the program name.
int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);

}  // namespace sdm::cli

#endif  // SDM_TOOLS_COMMANDS_H_
