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

#ifndef SDM_TEXT_H_
#define SDM_TEXT_H_

// Small text helpers shared by the file readers and writers.

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace sdm::text {

std::string_view trim(std::string_view s);

// Splits one CSV record on commas. Double-quoted fields may contain commas
// and "" escapes.
std::vector<std::string> split_csv_line(std::string_view line);

// Strict full-token parse; no leading '+', no trailing garbage.
std::optional<double> parse_double(std::string_view token);
std::optional<long long> parse_int(std::string_view token);

// Shortest representation that reads back to the same double.
std::string format_double(double value);

// Fixed-point with `decimals` digits after the point.
std::string format_fixed(double value, int decimals);

std::string to_lower(std::string_view s);

// Splits into lines, dropping a trailing '\r' from each.
std::vector<std::string_view> split_lines(std::string_view text);

// Whole-file read; throws ConfigError naming the path on failure.
std::string read_file(const std::filesystem::path& path);

// Whole-file write; throws Error naming the path on failure.
void write_file(const std::filesystem::path& path, std::string_view contents);

}  // namespace sdm::text

#endif  // SDM_TEXT_H_
