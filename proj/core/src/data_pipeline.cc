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

#include "sdm/data_pipeline.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <unordered_map>

#include "sdm/error.h"
#include "sdm/random.h"
#include "sdm/text.h"

namespace sdm {

std::size_t Dataset::count_label(int label) const {
  return static_cast<std::size_t>(
      std::count_if(samples.begin(), samples.end(),
                    [label](const Sample& s) { return s.label == label; }));
}

FeatureMatrix Dataset::feature_matrix() const {
  FeatureMatrix m(samples.size(), feature_names.size());
  for (std::size_t r = 0; r < samples.size(); ++r) {
    for (std::size_t c = 0; c < feature_names.size(); ++c) {
      m(r, c) = samples[r].features[c];
    }
  }
  return m;
}

std::vector<double> Dataset::targets() const {
  std::vector<double> y;
  y.reserve(samples.size());
  for (const auto& s : samples) y.push_back(static_cast<double>(s.label));
  return y;
}

std::vector<int> Dataset::labels() const {
  std::vector<int> y;
  y.reserve(samples.size());
  for (const auto& s : samples) y.push_back(s.label);
  return y;
}

void Dataset::validate() const {
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (samples[i].features.size() != feature_names.size()) {
      throw ConfigError("sample " + std::to_string(i) + " has " +
                        std::to_string(samples[i].features.size()) +
                        " features, expected " +
                        std::to_string(feature_names.size()));
    }
    if (samples[i].label != 0 && samples[i].label != 1) {
      throw ConfigError("sample " + std::to_string(i) + " has non-binary label");
    }
  }
}

std::optional<std::vector<double>> feature_vector(
    const GeoPoint& p, const FeatureRasters& rasters) {
  const auto elevation = rasters.elevation.sample(p);
  const auto precipitation = rasters.precipitation.sample(p);
  const auto temperature = rasters.temperature.sample(p);
  if (!elevation || !precipitation || !temperature) return std::nullopt;
  return std::vector<double>{p.lat, p.lon, *elevation, *precipitation,
                             *temperature};
}

std::vector<ObservationRecord> parse_observations_csv(std::string_view text) {
  const auto lines = text::split_lines(text);
  std::size_t header_idx = 0;
  while (header_idx < lines.size() && text::trim(lines[header_idx]).empty()) {
    ++header_idx;
  }
  if (header_idx == lines.size()) throw ParseError(1, "missing header row");

  const auto header = text::split_csv_line(lines[header_idx]);
  std::unordered_map<std::string, std::size_t> column;
  for (std::size_t i = 0; i < header.size(); ++i) {
    column.emplace(text::to_lower(text::trim(header[i])), i);
  }
  const auto find_column = [&](const char* name) {
    const auto it = column.find(name);
    if (it == column.end()) {
      throw ParseError(header_idx + 1,
                       std::string("missing column '") + name + "'");
    }
    return it->second;
  };
  const std::size_t species_col = find_column("species");
  const std::size_t lat_col = find_column("latitude");
  const std::size_t lon_col = find_column("longitude");
  const std::size_t date_col = find_column("date");
  const std::size_t needed =
      std::max({species_col, lat_col, lon_col, date_col}) + 1;

  std::vector<ObservationRecord> records;
  for (std::size_t i = header_idx + 1; i < lines.size(); ++i) {
    if (text::trim(lines[i]).empty()) continue;
    const std::size_t line_no = i + 1;
    const auto fields = text::split_csv_line(lines[i]);
    if (fields.size() < needed) {
      throw ParseError(line_no, "expected at least " + std::to_string(needed) +
                                    " columns, found " +
                                    std::to_string(fields.size()));
    }
    ObservationRecord rec;
    rec.species = std::string(text::trim(fields[species_col]));
    if (rec.species.empty()) throw ParseError(line_no, "empty species name");
    const auto lat = text::parse_double(fields[lat_col]);
    if (!lat) {
      throw ParseError(line_no, "unparsable latitude '" + fields[lat_col] + "'");
    }
    const auto lon = text::parse_double(fields[lon_col]);
    if (!lon) {
      throw ParseError(line_no,
                       "unparsable longitude '" + fields[lon_col] + "'");
    }
    rec.point = GeoPoint{*lat, *lon};
    if (!rec.point.is_valid()) {
      throw ParseError(line_no, "coordinate out of range");
    }
    rec.date = std::string(text::trim(fields[date_col]));
    rec.presence = true;
    records.push_back(std::move(rec));
  }
  return records;
}

std::vector<ObservationRecord> filter_species(
    const std::vector<ObservationRecord>& records, std::string_view species) {
  std::vector<ObservationRecord> out;
  std::copy_if(records.begin(), records.end(), std::back_inserter(out),
               [&](const ObservationRecord& r) { return r.species == species; });
  return out;
}

std::vector<GeoPoint> generate_pseudo_absences(
    const std::vector<GeoPoint>& presences, const BoundingBox& region,
    const PseudoAbsenceOptions& options) {
  const std::size_t max_attempts =
      options.max_attempts == 0 ? 1000 * options.count : options.max_attempts;
  if (max_attempts < options.count) {
    throw ConfigError("max_attempts must be at least count");
  }
  // Validates the region.
  BoundingBox::make(region.min_lat, region.max_lat, region.min_lon,
                    region.max_lon);

  Rng rng(stream_seed(options.seed, 0));
  std::uniform_real_distribution<double> lat_dist(region.min_lat,
                                                  region.max_lat);
  std::uniform_real_distribution<double> lon_dist(region.min_lon,
                                                  region.max_lon);

  std::vector<GeoPoint> accepted;
  accepted.reserve(options.count);
  std::size_t attempts = 0;
  while (accepted.size() < options.count) {
    if (attempts == max_attempts) {
      const double rate = static_cast<double>(accepted.size()) /
                          static_cast<double>(attempts);
      throw DataError("pseudo-absence sampling exhausted " +
                      std::to_string(max_attempts) + " attempts with " +
                      std::to_string(accepted.size()) + " of " +
                      std::to_string(options.count) +
                      " accepted (acceptance rate " +
                      text::format_fixed(rate, 6) + ")");
    }
    ++attempts;
    // Draw order is fixed (lat then lon) for reproducibility.
    const double lat = lat_dist(rng);
    const double lon = lon_dist(rng);
    const GeoPoint candidate{lat, lon};
    const bool too_close =
        std::any_of(presences.begin(), presences.end(), [&](const GeoPoint& p) {
          return !(haversine_km(candidate, p) > options.min_dist_km);
        });
    if (!too_close) accepted.push_back(candidate);
  }
  return accepted;
}

AssembledDataset assemble_dataset(
    const std::vector<ObservationRecord>& presences,
    const std::vector<GeoPoint>& absences, const FeatureRasters& rasters) {
  AssembledDataset out;
  out.dataset.feature_names = pipeline_feature_names();
  if (!presences.empty()) out.dataset.species = presences.front().species;
  for (const auto& rec : presences) {
    if (rec.species != out.dataset.species) {
      throw DataError("presence records mix species '" + out.dataset.species +
                      "' and '" + rec.species + "'");
    }
  }

  const auto add = [&](const GeoPoint& p, int label) {
    if (auto features = feature_vector(p, rasters)) {
      out.dataset.samples.push_back(Sample{std::move(*features), label});
    } else {
      ++out.dropped;
    }
  };
  for (const auto& rec : presences) add(rec.point, 1);
  for (const auto& p : absences) add(p, 0);

  if (out.dataset.samples.empty()) {
    throw DataError("zero surviving samples (" + std::to_string(out.dropped) +
                    " dropped for nodata or off-grid features)");
  }
  return out;
}

namespace {

std::vector<std::size_t> indices_with_label(const Dataset& dataset, int label) {
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < dataset.samples.size(); ++i) {
    if (dataset.samples[i].label == label) idx.push_back(i);
  }
  return idx;
}

Dataset subset(const Dataset& dataset, std::vector<std::size_t> indices) {
  std::sort(indices.begin(), indices.end());
  Dataset out{dataset.species, dataset.feature_names, {}};
  out.samples.reserve(indices.size());
  for (const auto i : indices) out.samples.push_back(dataset.samples[i]);
  return out;
}

}  // namespace

Dataset balanced_sample(const Dataset& dataset, std::size_t per_class,
                        std::uint64_t seed) {
  std::vector<std::size_t> chosen;
  for (const int label : {1, 0}) {
    auto idx = indices_with_label(dataset, label);
    if (idx.size() < per_class) {
      throw DataError("class " + std::to_string(label) + " has " +
                      std::to_string(idx.size()) + " < " +
                      std::to_string(per_class));
    }
    Rng rng(stream_seed(seed, static_cast<std::uint64_t>(label)));
    std::shuffle(idx.begin(), idx.end(), rng);
    chosen.insert(chosen.end(), idx.begin(),
                  idx.begin() + static_cast<std::ptrdiff_t>(per_class));
  }
  return subset(dataset, std::move(chosen));
}

SplitDataset split(const Dataset& dataset, std::uint64_t seed) {
  if (dataset.size() < 10) {
    throw DataError("split needs at least 10 samples, got " +
                    std::to_string(dataset.size()));
  }
  std::vector<std::size_t> train, val, test;
  for (const int label : {0, 1}) {
    auto idx = indices_with_label(dataset, label);
    Rng rng(stream_seed(seed, static_cast<std::uint64_t>(label)));
    std::shuffle(idx.begin(), idx.end(), rng);
    const std::size_t m = idx.size();
    const std::size_t n_train = 7 * m / 10;
    const std::size_t n_val = m / 10;
    const auto begin = idx.begin();
    train.insert(train.end(), begin, begin + static_cast<std::ptrdiff_t>(n_train));
    val.insert(val.end(), begin + static_cast<std::ptrdiff_t>(n_train),
               begin + static_cast<std::ptrdiff_t>(n_train + n_val));
    test.insert(test.end(), begin + static_cast<std::ptrdiff_t>(n_train + n_val),
                idx.end());
  }
  return SplitDataset{subset(dataset, std::move(train)),
                      subset(dataset, std::move(val)),
                      subset(dataset, std::move(test))};
}

std::string format_dataset_csv(const Dataset& dataset) {
  std::string out = "label";
  for (const auto& name : dataset.feature_names) out += "," + name;
  out += '\n';
  for (const auto& s : dataset.samples) {
    out += std::to_string(s.label);
    for (const double v : s.features) {
      out += ',';
      out += text::format_double(v);
    }
    out += '\n';
  }
  return out;
}

Dataset parse_dataset_csv(std::string_view text, std::string species) {
  const auto lines = text::split_lines(text);
  if (lines.empty() || text::trim(lines.front()).empty()) {
    throw ParseError(1, "missing header row");
  }
  const auto header = text::split_csv_line(lines.front());
  if (text::trim(header.front()) != "label") {
    throw ParseError(1, "first column must be 'label'");
  }
  Dataset out;
  out.species = std::move(species);
  for (std::size_t i = 1; i < header.size(); ++i) {
    out.feature_names.emplace_back(text::trim(header[i]));
  }
  for (std::size_t i = 1; i < lines.size(); ++i) {
    if (text::trim(lines[i]).empty()) continue;
    const std::size_t line_no = i + 1;
    const auto fields = text::split_csv_line(lines[i]);
    if (fields.size() != header.size()) {
      throw ParseError(line_no, "expected " + std::to_string(header.size()) +
                                    " columns, found " +
                                    std::to_string(fields.size()));
    }
    const auto label = text::parse_int(fields[0]);
    if (!label || (*label != 0 && *label != 1)) {
      throw ParseError(line_no, "label must be 0 or 1, got '" + fields[0] + "'");
    }
    Sample s;
    s.label = static_cast<int>(*label);
    s.features.reserve(fields.size() - 1);
    for (std::size_t c = 1; c < fields.size(); ++c) {
      const auto v = text::parse_double(fields[c]);
      if (!v || !std::isfinite(*v)) {
        throw ParseError(line_no, "non-finite or non-numeric value '" +
                                      fields[c] + "' in column '" +
                                      out.feature_names[c - 1] + "'");
      }
      s.features.push_back(*v);
    }
    out.samples.push_back(std::move(s));
  }
  return out;
}

}  // namespace sdm
