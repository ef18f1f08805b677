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

#include "sdm/geo_raster.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "sdm/error.h"
#include "sdm/text.h"

namespace sdm {

BoundingBox BoundingBox::make(double min_lat, double max_lat, double min_lon,
                              double max_lon) {
  if (!(min_lat < max_lat) || !(min_lon < max_lon)) {
    throw ConfigError("degenerate bounding box: lat [" +
                      text::format_double(min_lat) + ", " +
                      text::format_double(max_lat) + "], lon [" +
                      text::format_double(min_lon) + ", " +
                      text::format_double(max_lon) + "]");
  }
  return BoundingBox{min_lat, max_lat, min_lon, max_lon};
}

BoundingBox BoundingBox::around(const std::vector<GeoPoint>& points,
                                double margin_deg) {
  if (points.empty()) throw DataError("cannot bound an empty point set");
  BoundingBox box{points.front().lat, points.front().lat, points.front().lon,
                  points.front().lon};
  for (const auto& p : points) {
    box.min_lat = std::min(box.min_lat, p.lat);
    box.max_lat = std::max(box.max_lat, p.lat);
    box.min_lon = std::min(box.min_lon, p.lon);
    box.max_lon = std::max(box.max_lon, p.lon);
  }
  return make(std::max(-90.0, box.min_lat - margin_deg),
              std::min(90.0, box.max_lat + margin_deg),
              std::max(-180.0, box.min_lon - margin_deg),
              std::min(180.0, box.max_lon + margin_deg));
}

Raster::Raster(std::size_t ncols, std::size_t nrows, double xll, double yll,
               double cellsize, double nodata, std::vector<double> values)
    : ncols_(ncols),
      nrows_(nrows),
      xll_(xll),
      yll_(yll),
      cellsize_(cellsize),
      nodata_(nodata),
      values_(std::move(values)) {
  if (ncols_ == 0 || nrows_ == 0) {
    throw ConfigError("raster must have at least one row and column");
  }
  if (!(cellsize_ > 0.0) || !std::isfinite(cellsize_)) {
    throw ConfigError("raster cellsize must be positive");
  }
  if (values_.size() != ncols_ * nrows_) {
    throw ConfigError("raster expected " + std::to_string(ncols_ * nrows_) +
                      " values, got " + std::to_string(values_.size()));
  }
}

BoundingBox Raster::extent() const {
  return BoundingBox{yll_, yll_ + static_cast<double>(nrows_) * cellsize_,
                     xll_, xll_ + static_cast<double>(ncols_) * cellsize_};
}

std::optional<double> Raster::sample(const GeoPoint& p) const {
  const double col_f = std::floor((p.lon - xll_) / cellsize_);
  const double row_f = std::floor((p.lat - yll_) / cellsize_);
  // Also rejects NaN coordinates.
  if (!(col_f >= 0.0 && col_f < static_cast<double>(ncols_)) ||
      !(row_f >= 0.0 && row_f < static_cast<double>(nrows_))) {
    return std::nullopt;
  }
  const auto col = static_cast<std::size_t>(col_f);
  const auto row_from_south = static_cast<std::size_t>(row_f);
  const double v = values_[(nrows_ - 1 - row_from_south) * ncols_ + col];
  if (v == nodata_ || std::isnan(v)) return std::nullopt;
  return v;
}

namespace {

bool starts_numeric(std::string_view token) {
  if (token.empty()) return false;
  const char c = token.front();
  return (c >= '0' && c <= '9') || c == '-' || c == '+' || c == '.';
}

std::vector<std::string_view> tokens_of(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i])))
      ++i;
    const std::size_t start = i;
    while (i < line.size() &&
           !std::isspace(static_cast<unsigned char>(line[i])))
      ++i;
    if (i > start) out.push_back(line.substr(start, i - start));
  }
  return out;
}

double header_number(std::string_view token, std::size_t line,
                     std::string_view key) {
  const auto v = text::parse_double(token);
  if (!v || !std::isfinite(*v)) {
    throw ParseError(line, "header '" + std::string(key) +
                               "' has non-numeric value '" +
                               std::string(token) + "'");
  }
  return *v;
}

std::size_t header_count(std::string_view token, std::size_t line,
                         std::string_view key) {
  const double v = header_number(token, line, key);
  if (v < 1.0 || v != std::floor(v)) {
    throw ParseError(line, "header '" + std::string(key) +
                               "' must be a positive integer");
  }
  return static_cast<std::size_t>(v);
}

}  // namespace

Raster parse_ascii_grid(std::string_view text) {
  const auto lines = text::split_lines(text);

  std::optional<std::size_t> ncols, nrows;
  std::optional<double> xll, yll, cellsize;
  bool xll_center = false, yll_center = false;
  double nodata = Raster::kDefaultNodata;

  std::size_t i = 0;
  for (; i < lines.size(); ++i) {
    const auto toks = tokens_of(lines[i]);
    if (toks.empty()) continue;
    if (starts_numeric(toks.front())) break;
    const std::size_t line_no = i + 1;
    if (toks.size() != 2) {
      throw ParseError(line_no, "malformed header line '" +
                                    std::string(text::trim(lines[i])) + "'");
    }
    const std::string key = text::to_lower(toks[0]);
    if (key == "ncols") {
      ncols = header_count(toks[1], line_no, key);
    } else if (key == "nrows") {
      nrows = header_count(toks[1], line_no, key);
    } else if (key == "xllcorner" || key == "xllcenter") {
      xll = header_number(toks[1], line_no, key);
      xll_center = key == "xllcenter";
    } else if (key == "yllcorner" || key == "yllcenter") {
      yll = header_number(toks[1], line_no, key);
      yll_center = key == "yllcenter";
    } else if (key == "cellsize") {
      cellsize = header_number(toks[1], line_no, key);
      if (!(*cellsize > 0.0)) {
        throw ParseError(line_no, "cellsize must be positive");
      }
    } else if (key == "nodata_value") {
      nodata = header_number(toks[1], line_no, key);
    } else {
      throw ParseError(line_no, "unknown header key '" + std::string(toks[0]) +
                                    "'");
    }
  }
  const std::size_t header_end_line = i;
  const auto require = [&](bool present, const char* key) {
    if (!present) {
      throw ParseError(header_end_line,
                       std::string("missing header '") + key + "'");
    }
  };
  require(ncols.has_value(), "ncols");
  require(nrows.has_value(), "nrows");
  require(xll.has_value(), "xllcorner");
  require(yll.has_value(), "yllcorner");
  require(cellsize.has_value(), "cellsize");

  if (xll_center) *xll -= *cellsize / 2.0;
  if (yll_center) *yll -= *cellsize / 2.0;

  const std::size_t expected = *ncols * *nrows;
  std::vector<double> values;
  values.reserve(expected);
  std::size_t last_line = header_end_line;
  for (; i < lines.size(); ++i) {
    const auto toks = tokens_of(lines[i]);
    if (toks.empty()) continue;
    last_line = i + 1;
    for (const auto tok : toks) {
      const auto v = text::parse_double(tok);
      if (!v) {
        throw ParseError(i + 1, "non-numeric cell value '" + std::string(tok) +
                                    "'");
      }
      if (values.size() == expected) {
        throw ParseError(i + 1, "expected " + std::to_string(expected) +
                                    " values, found more");
      }
      values.push_back(*v);
    }
  }
  if (values.size() != expected) {
    throw ParseError(last_line, "expected " + std::to_string(expected) +
                                    " values, found " +
                                    std::to_string(values.size()));
  }
  return Raster(*ncols, *nrows, *xll, *yll, *cellsize, nodata,
                std::move(values));
}

Raster load_ascii_grid(const std::filesystem::path& path) {
  const std::string contents = text::read_file(path);
  try {
    return parse_ascii_grid(contents);
  } catch (const ParseError& e) {
    throw ParseError(e.line(), path.string() + ": " +
                                   std::string(e.what()));
  }
}

std::string format_ascii_grid(const Raster& raster) {
  std::string out;
  out += "ncols " + std::to_string(raster.ncols()) + "\n";
  out += "nrows " + std::to_string(raster.nrows()) + "\n";
  out += "xllcorner " + text::format_double(raster.xll()) + "\n";
  out += "yllcorner " + text::format_double(raster.yll()) + "\n";
  out += "cellsize " + text::format_double(raster.cellsize()) + "\n";
  out += "NODATA_value " + text::format_double(raster.nodata()) + "\n";
  for (std::size_t r = 0; r < raster.nrows(); ++r) {
    for (std::size_t c = 0; c < raster.ncols(); ++c) {
      if (c > 0) out += ' ';
      out += text::format_double(raster.at(r, c));
    }
    out += '\n';
  }
  return out;
}

double haversine_km(const GeoPoint& a, const GeoPoint& b) {
  constexpr double kDegToRad = std::numbers::pi / 180.0;
  const double phi1 = a.lat * kDegToRad;
  const double phi2 = b.lat * kDegToRad;
  const double dphi = (b.lat - a.lat) * kDegToRad;
  const double dlambda = (b.lon - a.lon) * kDegToRad;
  const double s_phi = std::sin(dphi / 2.0);
  const double s_lambda = std::sin(dlambda / 2.0);
  double h = s_phi * s_phi + std::cos(phi1) * std::cos(phi2) * s_lambda * s_lambda;
  h = std::clamp(h, 0.0, 1.0);
  return 2.0 * kEarthRadiusKm * std::asin(std::sqrt(h));
}

}  // namespace sdm
