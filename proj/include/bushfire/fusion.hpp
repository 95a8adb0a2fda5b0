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

// Spatio-temporal join of fire detections with station weather and NDVI.

#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "bushfire/geo.hpp"
#include "bushfire/ingest.hpp"

namespace bushfire {

// Stations in a grid index; ids are kept sorted so equal-distance ties
// resolve to the lexicographically smallest id.
class StationIndex {
 public:
  struct Station {
    std::string id;
    Region region;
    LatLonD location;
  };

  StationIndex() = default;
  StationIndex(std::vector<Station> stations, double radius_km = 5.0);

  // Builds from weather records; a station's location and region come from
  // its first record.
  static StationIndex from_weather(std::span<const WeatherDay> days, double radius_km = 5.0);

  std::vector<std::pair<std::string, double>> stations_within(const LatLonD& p, double radius_km) const;
  std::vector<Neighbor> within(const LatLonD& p, double radius_km) const { return grid_.within(p, radius_km); }

  const Station& station(std::size_t i) const { return stations_[i]; }
  std::optional<std::size_t> find(const std::string& id) const;
  std::size_t size() const { return stations_.size(); }
  double radius_km() const { return radius_km_; }

 private:
  std::vector<Station> stations_;
  double radius_km_ = 5.0;
  GeoGrid grid_;
};

struct WeatherVars {
  double tmin = 0.0, tmax = 0.0, tavg = 0.0, prcp = 0.0, wspd = 0.0;

  bool operator==(const WeatherVars&) const = default;
};

struct FusedRecord {
  FireEvent event;
  Region region = Region::NSW;
  WeatherVars weather;
  double distance_m = 0.0;  // to the nearest matched station
  double ndvi = 0.0;
  int ndvi_lag_days = 0;  // composite_date - event date

  bool operator==(const FusedRecord&) const = default;
};

struct NdviMatch {
  double ndvi;
  int lag_days;

  bool operator==(const NdviMatch&) const = default;
};

// Closest composite to `event_date`; ties go to the earlier composite.
// Returns nothing when the best |lag| exceeds window_days.
std::optional<NdviMatch> match_ndvi(std::span<const NdviSample> samples, const Date& event_date,
                                    int window_days = 8);

struct FusionConfig {
  double radius_km = 5.0;
  double idw_power = 2.0;
  int ndvi_window_days = 8;
  double ndvi_max_distance_km = 2.5;
  int threads = 1;
};

inline constexpr const char* kExcludeNoStation = "no_station";
inline constexpr const char* kExcludeMissingWeather = "missing_weather";
inline constexpr const char* kExcludeNoNdvi = "no_ndvi";

struct ExclusionSummary {
  std::size_t events = 0;
  std::size_t fused = 0;
  std::map<std::string, std::size_t> by_cause;

  std::size_t excluded() const;
  std::size_t count(const std::string& cause) const;
  std::string to_json() const;
};

struct FusionResult {
  std::vector<FusedRecord> records;
  ExclusionSummary exclusions;
};

FusionResult fuse(std::span<const FireEvent> events, std::span<const WeatherDay> weather,
                  std::span<const NdviSample> ndvi, const FusionConfig& config = {});

// Normalized fused-records file.
std::string write_fused(std::span<const FusedRecord> records);
ParseResult<FusedRecord> parse_fused_text(std::string_view text);
ParseResult<FusedRecord> parse_fused(const std::filesystem::path& path);

}  // namespace bushfire
