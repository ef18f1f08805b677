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

#ifndef SDM_TESTS_TESTING_FIXTURES_H_
#define SDM_TESTS_TESTING_FIXTURES_H_

// Shared helpers for the test binaries: scratch directories, a synthetic
// species fixture (rasters + observations), and independent oracles.

#include <unistd.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <numbers>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "sdm/geo_raster.h"
#include "sdm/text.h"

namespace sdm::testing {

// Removed on destruction.
class ScratchDir {
 public:
  explicit ScratchDir(const std::string& tag) {
    static std::uint64_t counter = 0;
    path_ = std::filesystem::temp_directory_path() /
            ("sdm_test_" + tag + "_" + std::to_string(::getpid()) +
             "_" + std::to_string(counter++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~ScratchDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  ScratchDir(const ScratchDir&) = delete;
  ScratchDir& operator=(const ScratchDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const {
    return path_ / name;
  }

 private:
  std::filesystem::path path_;
};

// Paths of a written species fixture.
struct SpeciesFixture {
  std::filesystem::path observations;
  std::filesystem::path elevation;
  std::filesystem::path precipitation;
  std::filesystem::path temperature;
  std::string species = "American Robin";
};

// Rasters over lat [30, 40) x lon [-100, -85) at 0.1 degrees. Elevation has a
// nodata block at lat [38, 39) x lon [-99, -97). Observations: `presences`
// sightings of the fixture species concentrated in the warm, low, eastern
// part of the grid (some land on the nodata block), plus a few records of a
// second species.
SpeciesFixture write_species_fixture(const std::filesystem::path& dir,
                                     std::size_t presences = 320,
                                     std::uint64_t seed = 11);

// Builds a Raster whose cell (row, col) holds fn(center lat, center lon).
template <typename Fn>
Raster make_raster(std::size_t ncols, std::size_t nrows, double xll, double yll,
                   double cellsize, Fn fn) {
  std::vector<double> values;
  values.reserve(ncols * nrows);
  for (std::size_t r = 0; r < nrows; ++r) {
    const double lat = yll + (static_cast<double>(nrows - 1 - r) + 0.5) * cellsize;
    for (std::size_t c = 0; c < ncols; ++c) {
      const double lon = xll + (static_cast<double>(c) + 0.5) * cellsize;
      values.push_back(fn(lat, lon));
    }
  }
  return Raster(ncols, nrows, xll, yll, cellsize, Raster::kDefaultNodata,
                std::move(values));
}

// Spherical law of cosines; algebraically independent of the haversine
// route the library uses.
inline double great_circle_cosine_km(const GeoPoint& a, const GeoPoint& b) {
  constexpr double k = std::numbers::pi / 180.0;
  const double c = std::sin(a.lat * k) * std::sin(b.lat * k) +
                   std::cos(a.lat * k) * std::cos(b.lat * k) *
                       std::cos((b.lon - a.lon) * k);
  return 6371.0 * std::acos(std::clamp(c, -1.0, 1.0));
}

// O(n^2) pairwise AUC: 1 per correctly ordered (pos, neg) pair, 0.5 per tie.
inline double auc_bruteforce(std::span<const int> y, std::span<const double> p) {
  double credit = 0.0;
  double pairs = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    if (y[i] != 1) continue;
    for (std::size_t j = 0; j < y.size(); ++j) {
      if (y[j] != 0) continue;
      pairs += 1.0;
      if (p[i] > p[j]) credit += 1.0;
      else if (p[i] == p[j]) credit += 0.5;
    }
  }
  return credit / pairs;
}

}  // namespace sdm::testing

#endif  // SDM_TESTS_TESTING_FIXTURES_H_
