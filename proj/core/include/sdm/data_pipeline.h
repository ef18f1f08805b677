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

#ifndef SDM_DATA_PIPELINE_H_
#define SDM_DATA_PIPELINE_H_

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sdm/geo_raster.h"
#include "sdm/matrix.h"

namespace sdm {

// Column order of every feature vector the pipeline produces.
inline const std::vector<std::string>& pipeline_feature_names() {
  static const std::vector<std::string> names = {
      "latitude", "longitude", "elevation", "precipitation", "temperature"};
  return names;
}

inline constexpr double kPseudoAbsenceMinDistanceKm = 1.1;
inline constexpr double kDefaultRegionMarginDeg = 0.5;
inline constexpr std::size_t kDefaultPerClass = 250;

struct ObservationRecord {
  std::string species;
  GeoPoint point;
  std::string date;  // ISO-8601, carried through but unused by the models
  bool presence = true;
};

struct Sample {
  std::vector<double> features;
  int label = 0;  // 1 presence, 0 pseudo-absence

  friend bool operator==(const Sample&, const Sample&) = default;
};

struct Dataset {
  std::string species;
  std::vector<std::string> feature_names;
  std::vector<Sample> samples;

  std::size_t size() const { return samples.size(); }
  std::size_t count_label(int label) const;

  FeatureMatrix feature_matrix() const;
  std::vector<double> targets() const;
  std::vector<int> labels() const;

  // Throws ConfigError when a sample's arity differs from feature_names or a
  // label is not 0/1.
  void validate() const;

  friend bool operator==(const Dataset&, const Dataset&) = default;
};

struct SplitDataset {
  Dataset train;
  Dataset val;
  Dataset test;
};

// Rasters backing the elevation / precipitation / temperature features.
struct FeatureRasters {
  Raster elevation;
  Raster precipitation;
  Raster temperature;
};

// Five-feature vector for `p`, or nullopt when any raster has no value there.
std::optional<std::vector<double>> feature_vector(const GeoPoint& p,
                                                  const FeatureRasters& rasters);

// Reads `species,latitude,longitude,date` records (extra columns ignored,
// column order free). Every record is a presence. Throws ParseError with the
// 1-based line number on bad input.
std::vector<ObservationRecord> parse_observations_csv(std::string_view text);

// Records whose species matches `species` exactly.
std::vector<ObservationRecord> filter_species(
    const std::vector<ObservationRecord>& records, std::string_view species);

struct PseudoAbsenceOptions {
  std::size_t count = 0;
  double min_dist_km = kPseudoAbsenceMinDistanceKm;
  std::uint64_t seed = 0;
  // 0 selects 1000 * count.
  std::size_t max_attempts = 0;
};

// Rejection-samples `count` points uniformly (in degrees) inside `region`,
// keeping only candidates farther than min_dist_km from every presence.
// Throws DataError with the observed acceptance rate when max_attempts runs
// out first.
std::vector<GeoPoint> generate_pseudo_absences(
    const std::vector<GeoPoint>& presences, const BoundingBox& region,
    const PseudoAbsenceOptions& options);

struct AssembledDataset {
  Dataset dataset;
  std::size_t dropped = 0;  // points with a nodata or off-grid feature
};

// Presences become label 1 and absences label 0, in that order. Throws
// DataError if no point survives the nodata filter, or if the records mix
// species.
AssembledDataset assemble_dataset(const std::vector<ObservationRecord>& presences,
                                  const std::vector<GeoPoint>& absences,
                                  const FeatureRasters& rasters);

// Uniform draw of `per_class` samples from each label without replacement.
// Output keeps input order. Throws DataError naming a deficient class.
Dataset balanced_sample(const Dataset& dataset, std::size_t per_class,
                        std::uint64_t seed);

// Stratified 70:10:20 split. Per class, the indices are shuffled and cut at
// floor(0.7 m) / floor(0.1 m) / rest. Each part keeps input order. Throws
// DataError when the dataset has fewer than 10 samples.
SplitDataset split(const Dataset& dataset, std::uint64_t seed);

// Export format: header `label,<feature names...>`, one row per sample,
// shortest round-trip number formatting.
std::string format_dataset_csv(const Dataset& dataset);

// Inverse of format_dataset_csv. The first column must be `label`; the rest
// become feature_names. Throws ParseError on malformed rows.
Dataset parse_dataset_csv(std::string_view text, std::string species = {});

}  // namespace sdm

#endif  // SDM_DATA_PIPELINE_H_
