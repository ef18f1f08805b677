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

#include "sdm/map_predict.h"

#include <cmath>

#include "sdm/error.h"
#include "sdm/text.h"

namespace sdm {

std::size_t grid_cells_along(double extent, double step) {
  const double cells = extent / step;
  return static_cast<std::size_t>(std::max(1.0, std::ceil(cells - 1e-9)));
}

PredictionGrid predict_grid(const Model& model, const FeatureRasters& rasters,
                            const BoundingBox& bbox, double step) {
  if (!(step > 0.0) || !std::isfinite(step)) {
    throw ConfigError("grid step must be positive");
  }
  const auto checked = BoundingBox::make(bbox.min_lat, bbox.max_lat,
                                         bbox.min_lon, bbox.max_lon);
  if (feature_names(model) != pipeline_feature_names()) {
    throw ConfigError(
        "model features do not match the pipeline feature order "
        "(latitude, longitude, elevation, precipitation, temperature)");
  }

  PredictionGrid grid;
  grid.bbox = checked;
  grid.step = step;
  grid.rows = grid_cells_along(checked.max_lat - checked.min_lat, step);
  grid.cols = grid_cells_along(checked.max_lon - checked.min_lon, step);
  grid.cells.resize(grid.rows * grid.cols);

  std::vector<std::size_t> scored;
  std::vector<double> features;
  bool any_inside = false;
  const auto inside_all = [&](const GeoPoint& p) {
    for (const Raster* r :
         {&rasters.elevation, &rasters.precipitation, &rasters.temperature}) {
      const auto e = r->extent();
      if (!(p.lat >= e.min_lat && p.lat < e.max_lat && p.lon >= e.min_lon &&
            p.lon < e.max_lon)) {
        return false;
      }
    }
    return true;
  };

  for (std::size_t i = 0; i < grid.rows; ++i) {
    for (std::size_t j = 0; j < grid.cols; ++j) {
      const std::size_t k = i * grid.cols + j;
      const GeoPoint center{
          checked.max_lat - (static_cast<double>(i) + 0.5) * step,
          checked.min_lon + (static_cast<double>(j) + 0.5) * step};
      grid.cells[k].center = center;
      any_inside = any_inside || inside_all(center);
      if (auto fv = feature_vector(center, rasters)) {
        features.insert(features.end(), fv->begin(), fv->end());
        scored.push_back(k);
      }
    }
  }
  if (!any_inside) {
    throw DataError("bounding box lies outside the raster coverage");
  }

  const std::size_t arity = pipeline_feature_names().size();
  const FeatureMatrix X(scored.size(), arity, std::move(features));
  const auto prediction = predict(model, X);
  for (std::size_t s = 0; s < scored.size(); ++s) {
    grid.cells[scored[s]].probability = prediction.probabilities[s];
  }
  return grid;
}

std::size_t write_grid_csv(const PredictionGrid& grid, std::ostream& sink) {
  sink << "latitude,longitude,probability\n";
  std::size_t rows = 0;
  for (const auto& cell : grid.cells) {
    if (!cell.probability) continue;
    sink << text::format_fixed(cell.center.lat, 6) << ','
         << text::format_fixed(cell.center.lon, 6) << ','
         << text::format_fixed(*cell.probability, 6) << '\n';
    ++rows;
  }
  sink.flush();
  if (!sink) throw Error("failed writing prediction grid CSV");
  return rows;
}

void write_heatmap_pgm(const PredictionGrid& grid, std::ostream& sink) {
  sink << "P2\n" << grid.cols << ' ' << grid.rows << "\n255\n";
  for (std::size_t i = 0; i < grid.rows; ++i) {
    for (std::size_t j = 0; j < grid.cols; ++j) {
      const auto& p = grid.at(i, j).probability;
      const long level =
          p ? std::lround(255.0 * std::clamp(*p, 0.0, 1.0)) : 0L;
      if (j > 0) sink << ' ';
      sink << level;
    }
    sink << '\n';
  }
  sink.flush();
  if (!sink) throw Error("failed writing heatmap PGM");
}

}  // namespace sdm
