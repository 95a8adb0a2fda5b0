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

// Parsers for the three input file families: satellite fire detections,
// station-day weather observations and point-sampled NDVI composites.
//
// Parsing is total: every data row either becomes a record or is counted in
// the drop summary under a cause. Only header problems (and unknown region
// codes) raise SchemaError.

#pragma once

#include <array>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "bushfire/text.hpp"

namespace bushfire {

enum class Region { WA, QLD, VIC, TAS, SA, NSW, NT, ACT };

inline constexpr std::array<Region, 8> kAllRegions = {Region::WA,  Region::QLD, Region::VIC,
                                                      Region::TAS, Region::SA,  Region::NSW,
                                                      Region::NT,  Region::ACT};

std::string_view to_string(Region r);
std::optional<Region> parse_region(std::string_view code);

// Australian bounding box applied to fire detections.
struct BoundingBox {
  double lat_min = -44.0;
  double lat_max = -10.0;
  double lon_min = 113.0;
  double lon_max = 154.0;

  bool contains(double lat, double lon) const {
    return lat >= lat_min && lat <= lat_max && lon >= lon_min && lon <= lon_max;
  }
};

struct FireEvent {
  double latitude = 0.0;
  double longitude = 0.0;
  Date date{};
  int acq_time = 0;  // HHMM, UTC
  double frp = 0.0;  // MW
  std::optional<int> confidence;

  bool operator==(const FireEvent&) const = default;
};

struct WeatherDay {
  std::string station_id;
  Region region = Region::NSW;
  double latitude = 0.0;
  double longitude = 0.0;
  Date date{};
  // Any variable may be missing for a station-day; fusion interpolates each
  // variable over the stations that reported it.
  std::optional<double> tmin, tmax, tavg, prcp, wspd;

  bool operator==(const WeatherDay&) const = default;
};

struct NdviSample {
  double latitude = 0.0;
  double longitude = 0.0;
  Date composite_date{};  // first day of the 16-day composite
  double ndvi = 0.0;

  bool operator==(const NdviSample&) const = default;
};

struct DropSummary {
  std::size_t rows = 0;  // data rows seen (blank lines excluded)
  std::map<std::string, std::size_t> by_cause;

  std::size_t dropped() const;
  void add(const std::string& cause) { ++by_cause[cause]; }
  std::size_t count(const std::string& cause) const;
};

template <class Record>
struct ParseResult {
  std::vector<Record> records;
  DropSummary drops;
};

struct IngestOptions {
  Date study_start = Date{std::chrono::year(2015), std::chrono::January, std::chrono::day(1)};
  Date study_end = Date{std::chrono::year(2023), std::chrono::December, std::chrono::day(31)};
  BoundingBox bbox{};
};

// Drop causes.
inline constexpr const char* kDropMissing = "missing_value";
inline constexpr const char* kDropUnparseable = "unparseable";
inline constexpr const char* kDropOutOfBounds = "out_of_bounds";
inline constexpr const char* kDropOutOfWindow = "out_of_window";
inline constexpr const char* kDropInvalid = "invalid_value";
inline constexpr const char* kDropInconsistent = "inconsistent";
inline constexpr const char* kDropOutOfRange = "out_of_range";

ParseResult<FireEvent> parse_fire_events_text(std::string_view text, const IngestOptions& opts = {});
ParseResult<WeatherDay> parse_weather_text(std::string_view text, const IngestOptions& opts = {});
ParseResult<NdviSample> parse_ndvi_text(std::string_view text, const IngestOptions& opts = {});

ParseResult<FireEvent> parse_fire_events(const std::filesystem::path& path, const IngestOptions& opts = {});
ParseResult<WeatherDay> parse_weather(const std::filesystem::path& path, const IngestOptions& opts = {});
ParseResult<NdviSample> parse_ndvi(const std::filesystem::path& path, const IngestOptions& opts = {});

// Normalized writers; their output re-parses to identical records.
std::string write_fire_events(const std::vector<FireEvent>& events);
std::string write_weather(const std::vector<WeatherDay>& days);
std::string write_ndvi(const std::vector<NdviSample>& samples);

// Start of the 16-day composite containing `d` (composites start on day of
// year 1, 17, 33, ... and restart every January 1st).
Date composite_start(const Date& d);

std::string format_hhmm(int hhmm);

}  // namespace bushfire
