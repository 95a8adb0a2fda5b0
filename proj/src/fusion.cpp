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

#include "bushfire/fusion.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "bushfire/parallel.hpp"
#include "json.hpp"

namespace bushfire {

StationIndex::StationIndex(std::vector<Station> stations, double radius_km)
    : stations_(std::move(stations)), radius_km_(radius_km) {
  std::stable_sort(stations_.begin(), stations_.end(),
                   [](const Station& a, const Station& b) { return a.id < b.id; });
  std::vector<LatLonD> pts;
  pts.reserve(stations_.size());
  for (const auto& s : stations_) pts.push_back(s.location);
  grid_ = GeoGrid(std::move(pts), std::max(radius_km, 1e-3));
}

StationIndex StationIndex::from_weather(std::span<const WeatherDay> days, double radius_km) {
  std::vector<Station> stations;
  std::unordered_map<std::string, std::size_t> seen;
  for (const auto& d : days) {
    if (seen.emplace(d.station_id, stations.size()).second)
      stations.push_back({d.station_id, d.region, {d.latitude, d.longitude}});
  }
  return StationIndex(std::move(stations), radius_km);
}

std::vector<std::pair<std::string, double>> StationIndex::stations_within(const LatLonD& p,
                                                                           double radius_km) const {
  std::vector<std::pair<std::string, double>> out;
  for (const auto& n : grid_.within(p, radius_km)) out.emplace_back(stations_[n.index].id, n.distance_km);
  return out;
}

std::optional<std::size_t> StationIndex::find(const std::string& id) const {
  auto it = std::lower_bound(stations_.begin(), stations_.end(), id,
                             [](const Station& s, const std::string& v) { return s.id < v; });
  if (it == stations_.end() || it->id != id) return std::nullopt;
  return static_cast<std::size_t>(it - stations_.begin());
}

std::optional<NdviMatch> match_ndvi(std::span<const NdviSample> samples, const Date& event_date,
                                    int window_days) {
  std::optional<NdviMatch> best;
  Date best_date{};
  for (const auto& s : samples) {
    const int lag = days_between(event_date, s.composite_date);
    if (std::abs(lag) > window_days) continue;
    if (!best || std::abs(lag) < std::abs(best->lag_days) ||
        (std::abs(lag) == std::abs(best->lag_days) && s.composite_date < best_date)) {
      best = NdviMatch{s.ndvi, lag};
      best_date = s.composite_date;
    }
  }
  return best;
}

std::size_t ExclusionSummary::excluded() const {
  std::size_t n = 0;
  for (const auto& [k, v] : by_cause) n += v;
  return n;
}

std::size_t ExclusionSummary::count(const std::string& cause) const {
  auto it = by_cause.find(cause);
  return it == by_cause.end() ? 0 : it->second;
}

std::string ExclusionSummary::to_json() const {
  nlohmann::json j;
  j["events"] = events;
  j["fused"] = fused;
  j["excluded"] = by_cause;
  return j.dump(2) + "\n";
}

namespace {

std::int64_t day_number(const Date& d) { return std::chrono::sys_days(d).time_since_epoch().count(); }

struct PairHash {
  std::size_t operator()(const std::pair<std::size_t, std::int64_t>& k) const {
    return std::hash<std::uint64_t>()(splitmix(k.first * 0x9e3779b97f4a7c15ULL ^ static_cast<std::uint64_t>(k.second)));
  }
  static std::uint64_t splitmix(std::uint64_t x) {
    x ^= x >> 31;
    x *= 0xbf58476d1ce4e5b9ULL;
    return x ^ (x >> 29);
  }
};

struct NdviLocation {
  LatLonD location;
  std::vector<NdviSample> samples;
};

}  // namespace

FusionResult fuse(std::span<const FireEvent> events, std::span<const WeatherDay> weather,
                  std::span<const NdviSample> ndvi, const FusionConfig& config) {
  const StationIndex stations = StationIndex::from_weather(weather, config.radius_km);

  // (station, day) -> first weather record.
  std::unordered_map<std::pair<std::size_t, std::int64_t>, const WeatherDay*, PairHash> by_day;
  by_day.reserve(weather.size());
  for (const auto& w : weather) {
    auto idx = stations.find(w.station_id);
    by_day.emplace(std::make_pair(*idx, day_number(w.date)), &w);
  }

  // NDVI samples grouped by exact location, in first-appearance order.
  std::vector<NdviLocation> locations;
  {
    std::map<std::pair<double, double>, std::size_t> seen;
    for (const auto& s : ndvi) {
      auto [it, inserted] = seen.emplace(std::make_pair(s.latitude, s.longitude), locations.size());
      if (inserted) locations.push_back({{s.latitude, s.longitude}, {}});
      locations[it->second].samples.push_back(s);
    }
  }
  std::vector<LatLonD> ndvi_points;
  ndvi_points.reserve(locations.size());
  for (const auto& l : locations) ndvi_points.push_back(l.location);
  const GeoGrid ndvi_grid(std::move(ndvi_points), std::max(config.ndvi_max_distance_km, 1e-3));

  struct Outcome {
    std::optional<FusedRecord> record;
    const char* cause = nullptr;
  };
  std::vector<Outcome> outcomes(events.size());

  parallel_for(events.size(), config.threads, [&](std::size_t i) {
    const FireEvent& ev = events[i];
    const LatLonD p{ev.latitude, ev.longitude};
    const std::int64_t day = day_number(ev.date);

    struct Contributor {
      double distance_km;
      const WeatherDay* day;
    };
    std::vector<Contributor> contributors;
    for (const auto& n : stations.within(p, config.radius_km)) {
      auto it = by_day.find({n.index, day});
      if (it != by_day.end()) contributors.push_back({n.distance_km, it->second});
    }
    if (contributors.empty()) {
      outcomes[i].cause = kExcludeNoStation;
      return;
    }

    FusedRecord rec;
    rec.event = ev;
    rec.region = contributors.front().day->region;
    rec.distance_m = contributors.front().distance_km * 1000.0;

    std::vector<DistanceValue<double>> samples;
    auto interpolate = [&](std::optional<double> WeatherDay::*field, double& out) {
      samples.clear();
      for (const auto& c : contributors)
        if (auto v = c.day->*field) samples.push_back({c.distance_km, *v});
      if (samples.empty()) return false;
      out = idw(std::span<const DistanceValue<double>>(samples), config.idw_power);
      return true;
    };
    if (!interpolate(&WeatherDay::tmin, rec.weather.tmin) ||
        !interpolate(&WeatherDay::tmax, rec.weather.tmax) ||
        !interpolate(&WeatherDay::tavg, rec.weather.tavg) ||
        !interpolate(&WeatherDay::prcp, rec.weather.prcp) ||
        !interpolate(&WeatherDay::wspd, rec.weather.wspd)) {
      outcomes[i].cause = kExcludeMissingWeather;
      return;
    }

    auto nearest = ndvi_grid.nearest_within(p, config.ndvi_max_distance_km);
    if (!nearest) {
      outcomes[i].cause = kExcludeNoNdvi;
      return;
    }
    auto match = match_ndvi(locations[nearest->index].samples, ev.date, config.ndvi_window_days);
    if (!match) {
      outcomes[i].cause = kExcludeNoNdvi;
      return;
    }
    rec.ndvi = match->ndvi;
    rec.ndvi_lag_days = match->lag_days;
    outcomes[i].record = rec;
  });

  FusionResult result;
  result.exclusions.events = events.size();
  result.exclusions.by_cause[kExcludeNoStation] = 0;
  result.exclusions.by_cause[kExcludeMissingWeather] = 0;
  result.exclusions.by_cause[kExcludeNoNdvi] = 0;
  for (auto& o : outcomes) {
    if (o.record) {
      result.records.push_back(std::move(*o.record));
    } else {
      ++result.exclusions.by_cause[o.cause];
    }
  }
  result.exclusions.fused = result.records.size();
  return result;
}

namespace {

constexpr const char* kFusedHeader =
    "latitude,longitude,acq_date,acq_time,frp,confidence,region,tmin,tmax,tavg,prcp,wspd,"
    "distance_m,ndvi,ndvi_lag_days";

}  // namespace

std::string write_fused(std::span<const FusedRecord> records) {
  std::string out = std::string(kFusedHeader) + "\n";
  for (const auto& r : records) {
    const auto& e = r.event;
    out += join_csv({format_double(e.latitude), format_double(e.longitude), format_date(e.date),
                     format_hhmm(e.acq_time), format_double(e.frp),
                     e.confidence ? std::to_string(*e.confidence) : std::string(),
                     std::string(to_string(r.region)), format_double(r.weather.tmin),
                     format_double(r.weather.tmax), format_double(r.weather.tavg),
                     format_double(r.weather.prcp), format_double(r.weather.wspd),
                     format_double(r.distance_m), format_double(r.ndvi),
                     std::to_string(r.ndvi_lag_days)});
    out.push_back('\n');
  }
  return out;
}

ParseResult<FusedRecord> parse_fused_text(std::string_view text) {
  constexpr std::string_view kind = "fused records";
  auto lines = split_lines(text);
  if (lines.empty()) throw SchemaError("fused records file has no header row");
  const CsvHeader header(split_csv_line(lines.front()));
  const char* names[] = {"latitude", "longitude", "acq_date", "acq_time", "frp",
                         "region",   "tmin",      "tmax",     "tavg",     "prcp",
                         "wspd",     "distance_m", "ndvi",    "ndvi_lag_days"};
  std::size_t col[14];
  for (std::size_t k = 0; k < 14; ++k) col[k] = header.require(names[k], kind);
  const auto c_conf = header.find("confidence");

  ParseResult<FusedRecord> out;
  for (std::size_t li = 1; li < lines.size(); ++li) {
    ++out.drops.rows;
    const auto f = split_csv_line(lines[li]);
    auto cell = [&](std::size_t k) { return col[k] < f.size() ? trim(f[col[k]]) : std::string_view{}; };
    bool missing = false;
    for (std::size_t k = 0; k < 14; ++k) missing |= cell(k).empty();
    if (missing) {
      out.drops.add(kDropMissing);
      continue;
    }
    FusedRecord r;
    auto lat = parse_double(cell(0)), lon = parse_double(cell(1));
    auto date = parse_date(cell(2));
    auto time = parse_int(cell(3));
    auto frp = parse_double(cell(4));
    auto region = parse_region(cell(5));
    double w[5];
    bool ok = lat && lon && date && time && frp && region;
    for (std::size_t k = 0; k < 5 && ok; ++k) {
      auto v = parse_double(cell(6 + k));
      ok = v.has_value();
      if (ok) w[k] = *v;
    }
    auto dist = parse_double(cell(11)), nd = parse_double(cell(12));
    auto lag = parse_int(cell(13));
    ok = ok && dist && nd && lag;
    if (!ok) {
      out.drops.add(kDropUnparseable);
      continue;
    }
    r.event.latitude = *lat;
    r.event.longitude = *lon;
    r.event.date = *date;
    r.event.acq_time = static_cast<int>(*time);
    r.event.frp = *frp;
    if (c_conf && *c_conf < f.size())
      if (auto c = parse_int(f[*c_conf])) r.event.confidence = static_cast<int>(*c);
    r.region = *region;
    r.weather = {w[0], w[1], w[2], w[3], w[4]};
    r.distance_m = *dist;
    r.ndvi = *nd;
    r.ndvi_lag_days = static_cast<int>(*lag);
    if (!std::isfinite(r.event.frp) || r.event.frp < 0.0) {
      out.drops.add(kDropInvalid);
      continue;
    }
    out.records.push_back(r);
  }
  return out;
}

ParseResult<FusedRecord> parse_fused(const std::filesystem::path& path) {
  return parse_fused_text(read_file(path));
}

}  // namespace bushfire
