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

#include "testing/fixtures.h"

#include <sstream>

namespace sdm::testing {

namespace {

bool in_nodata_block(double lat, double lon) {
  return lat >= 38.0 && lat < 39.0 && lon >= -99.0 && lon < -97.0;
}

}  // namespace

SpeciesFixture write_species_fixture(const std::filesystem::path& dir,
                                     std::size_t presences, std::uint64_t seed) {
  SpeciesFixture fx;
  fx.observations = dir / "observations.csv";
  fx.elevation = dir / "elevation.asc";
  fx.precipitation = dir / "precipitation.asc";
  fx.temperature = dir / "temperature.asc";

  constexpr std::size_t kCols = 150;
  constexpr std::size_t kRows = 100;
  const auto elevation =
      make_raster(kCols, kRows, -100.0, 30.0, 0.1, [](double lat, double lon) {
        if (in_nodata_block(lat, lon)) return Raster::kDefaultNodata;
        return 200.0 + 40.0 * (lat - 30.0) + 90.0 * (-85.0 - lon);
      });
  const auto precipitation =
      make_raster(kCols, kRows, -100.0, 30.0, 0.1, [](double lat, double lon) {
        return 400.0 + 50.0 * (lon + 100.0) + 30.0 * std::sin(lat);
      });
  const auto temperature =
      make_raster(kCols, kRows, -100.0, 30.0, 0.1, [](double lat, double lon) {
        return 28.0 - 0.9 * (lat - 30.0) + 0.05 * (lon + 100.0);
      });
  text::write_file(fx.elevation, format_ascii_grid(elevation));
  text::write_file(fx.precipitation, format_ascii_grid(precipitation));
  text::write_file(fx.temperature, format_ascii_grid(temperature));

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> lat(31.0, 39.0);
  std::uniform_real_distribution<double> east_lon(-92.0, -86.0);
  std::uniform_real_distribution<double> any_lon(-99.5, -86.0);
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  std::ostringstream csv;
  csv << "species,latitude,longitude,date\n";
  for (std::size_t i = 0; i < presences; ++i) {
    const double la = lat(rng);
    const double lo = coin(rng) < 0.8 ? east_lon(rng) : any_lon(rng);
    csv << fx.species << ',' << text::format_fixed(la, 5) << ','
        << text::format_fixed(lo, 5) << ",2023-05-" << (1 + i % 28 < 10 ? "0" : "")
        << 1 + i % 28 << '\n';
  }
  for (int i = 0; i < 5; ++i) {
    csv << "Blue Jay," << 32 + i << ",-95.5,2023-06-01\n";
  }
  text::write_file(fx.observations, csv.str());
  return fx;
}

}  // namespace sdm::testing
