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

#ifndef SDM_GEO_RASTER_H_
#define SDM_GEO_RASTER_H_

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace sdm {

inline constexpr double kEarthRadiusKm = 6371.0;

struct GeoPoint {
  double lat = 0.0;
  double lon = 0.0;

  bool is_valid() const {
    return lat >= -90.0 && lat <= 90.0 && lon >= -180.0 && lon <= 180.0;
  }

  friend bool operator==(const GeoPoint&, const GeoPoint&) = default;
};

// Axis-aligned lat/lon rectangle. Construct through `make` to get the
// min < max checks.
struct BoundingBox {
  double min_lat = 0.0;
  double max_lat = 0.0;
  double min_lon = 0.0;
  double max_lon = 0.0;

  // Throws ConfigError unless min_lat < max_lat and min_lon < max_lon.
  static BoundingBox make(double min_lat, double max_lat, double min_lon,
                          double max_lon);

  bool contains(const GeoPoint& p) const {
    return p.lat >= min_lat && p.lat <= max_lat && p.lon >= min_lon &&
           p.lon <= max_lon;
  }
  bool intersects(const BoundingBox& other) const {
    return min_lat < other.max_lat && other.min_lat < max_lat &&
           min_lon < other.max_lon && other.min_lon < max_lon;
  }

  // Smallest box holding every point, grown by `margin_deg` on each side and
  // clipped to the valid lat/lon range.
  static BoundingBox around(const std::vector<GeoPoint>& points,
                            double margin_deg);

  friend bool operator==(const BoundingBox&, const BoundingBox&) = default;
};

// Single-band regular lat/lon grid. Row 0 of `values` is the northernmost
// row. Immutable once built.
class Raster {
 public:
  static constexpr double kDefaultNodata = -9999.0;

  // Throws ConfigError if the dimensions are not positive or the value count
  // does not match ncols * nrows.
  Raster(std::size_t ncols, std::size_t nrows, double xll, double yll,
         double cellsize, double nodata, std::vector<double> values);

  std::size_t ncols() const { return ncols_; }
  std::size_t nrows() const { return nrows_; }
  double xll() const { return xll_; }
  double yll() const { return yll_; }
  double cellsize() const { return cellsize_; }
  double nodata() const { return nodata_; }
  const std::vector<double>& values() const { return values_; }

  // `row` counts from the north edge.
  double at(std::size_t row, std::size_t col) const {
    return values_[row * ncols_ + col];
  }

  BoundingBox extent() const;

  // Value of the cell holding `p`, or nullopt when `p` is off the grid or
  // the cell carries the nodata sentinel. A point on a cell's east or north
  // edge belongs to the neighbouring cell.
  std::optional<double> sample(const GeoPoint& p) const;

  friend bool operator==(const Raster&, const Raster&) = default;

 private:
  std::size_t ncols_;
  std::size_t nrows_;
  double xll_;
  double yll_;
  double cellsize_;
  double nodata_;
  std::vector<double> values_;
};

// Parses an ESRI ASCII grid. Header keys are case-insensitive; both the
// `xllcorner`/`yllcorner` and `xllcenter`/`yllcenter` forms are accepted.
// Throws ParseError carrying the offending line number.
Raster parse_ascii_grid(std::string_view text);

// Reads and parses an `.asc` file. Throws ConfigError if it cannot be read.
Raster load_ascii_grid(const std::filesystem::path& path);

// Writes `raster` in ESRI ASCII grid form using shortest round-trip number
// formatting, so parse_ascii_grid(format_ascii_grid(r)) == r.
std::string format_ascii_grid(const Raster& raster);

// Great-circle distance on a sphere of radius kEarthRadiusKm.
double haversine_km(const GeoPoint& a, const GeoPoint& b);

}  // namespace sdm

#endif  // SDM_GEO_RASTER_H_
