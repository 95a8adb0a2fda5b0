/*
 * Copyright 2026 The Bushfire Risk Authors.
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

// Delimited-text and calendar helpers shared by every file format.

#pragma once

#include <chrono>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace bushfire {

using Date = std::chrono::year_month_day;

std::vector<std::string> split_csv_line(std::string_view line);
std::string join_csv(const std::vector<std::string>& fields);

std::string_view trim(std::string_view s);

// Shortest representation that parses back to the same double.
std::string format_double(double v);
std::optional<double> parse_double(std::string_view s);
std::optional<long long> parse_int(std::string_view s);

// ISO-8601 calendar date, YYYY-MM-DD.
std::optional<Date> parse_date(std::string_view s);
std::string format_date(const Date& d);
// b - a in days.
int days_between(const Date& a, const Date& b);
Date add_days(const Date& d, int days);
int day_of_year(const Date& d);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view contents);

// Header row of a delimited file mapped to column positions.
class CsvHeader {
 public:
  explicit CsvHeader(const std::vector<std::string>& names);

  std::optional<std::size_t> find(std::string_view name) const;
  // Throws SchemaError naming the column when absent.
  std::size_t require(std::string_view name, std::string_view file_kind) const;

 private:
  std::map<std::string, std::size_t, std::less<>> index_;
};

// Splits a text blob into lines, dropping '\r' and blank lines.
std::vector<std::string_view> split_lines(std::string_view text);

}  // namespace bushfire
