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

#ifndef SDM_MAP_PREDICT_H_
#define SDM_MAP_PREDICT_H_

#include <cstddef>
#include <optional>
#include <ostream>
#include <vector>

#include "sdm/data_pipeline.h"
#include "sdm/ensemble.h"
#include "sdm/geo_raster.h"

namespace sdm {

inline constexpr double kDefaultGridStepDeg = 0.05;

struct GridCell {
  GeoPoint center;
  std::optional<double> probability;  // nullopt where any feature is nodata
};

// Cells ordered north-to-south, then west-to-east. Cell (i, j) is centred
// at (max_lat - (i + 0.5) * step, min_lon + (j + 0.5) * step).
struct PredictionGrid {
  BoundingBox bbox;
  double step = kDefaultGridStepDeg;
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<GridCell> cells;

  const GridCell& at(std::size_t row, std::size_t col) const {
    return cells[row * cols + col];
  }
};

// ceil(extent / step), ignoring rounding noise below 1e-9 cells.
std::size_t grid_cells_along(double extent, double step);

// Scores every cell centre with the model's probability output. The model's
// feature names must equal pipeline_feature_names(). Throws ConfigError on
// a non-positive step or schema mismatch, and DataError when no cell centre
// lies inside all three rasters.
PredictionGrid predict_grid(const Model& model, const FeatureRasters& rasters,
                            const BoundingBox& bbox, double step);

// `latitude,longitude,probability` with 6 decimals; absent cells omitted.
// Returns the number of data rows. Throws Error if the stream fails.
std::size_t write_grid_csv(const PredictionGrid& grid, std::ostream& sink);

// Plain (P2) graymap, one pixel per cell, row 0 north. Intensity is
// round(255 * p); absent cells are 0. Throws Error if the stream fails.
void write_heatmap_pgm(const PredictionGrid& grid, std::ostream& sink);

}  // namespace sdm

#endif  // SDM_MAP_PREDICT_H_
