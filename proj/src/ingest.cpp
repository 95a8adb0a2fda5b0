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

#include "bushfire/ingest.hpp"

#include <cmath>
#include <cstdio>

#include "bushfire/common.hpp"

namespace bushfire {

namespace {

// Outcome of reading one cell.
enum class Cell { kOk, kMissing, kBad };

struct RowReader {
  const std::vector<std::string>& fields;

  std::string_view raw(std::size_t col) const {
    return col < fields.size() ? trim(fields[col]) : std::string_view{};
  }

  Cell number(std::size_t col, double& out) const {
    auto s = raw(col);
    if (s.empty()) return Cell::kMissing;
    auto v = parse_double(s);
    if (!v || !std::isfinite(*v)) return Cell::kBad;
    out = *v;
    return Cell::kOk;
  }

  Cell optional_number(std::size_t col, std::optional<double>& out) const {
    double v = 0.0;
    Cell c = number(col, v);
    if (c == Cell::kOk) out = v;
    return c;
  }

  Cell date(std::size_t col, Date& out) const {
    auto s = raw(col);
    if (s.empty()) return Cell::kMissing;
    auto d = parse_date(s);
    if (!d) return Cell::kBad;
    out = *d;
    return Cell::kOk;
  }
};

bool in_window(const Date& d, const IngestOptions& opts) {
  return d >= opts.study_start && d <= opts.study_end;
}

bool valid_coordinates(double lat, double lon) {
  return lat >= -90.0 && lat <= 90.0 && lon >= -180.0 && lon <= 180.0;
}

std::optional<int> parse_hhmm(std::string_view s) {
  s = trim(s);
  if (s.empty() || s.size() > 4) return std::nullopt;
  for (char c : s)
    if (c < '0' || c > '9') return std::nullopt;
  auto v = parse_int(s);
  if (!v) return std::nullopt;
  const int hh = static_cast<int>(*v / 100);
  const int mm = static_cast<int>(*v % 100);
  if (hh > 23 || mm > 59) return std::nullopt;
  return static_cast<int>(*v);
}

// Splits text into header + data rows. Throws SchemaError on a missing header.
std::pair<CsvHeader, std::vector<std::string_view>> header_and_rows(std::string_view text,
                                                                     std::string_view kind) {
  auto lines = split_lines(text);
  if (lines.empty()) throw SchemaError(std::string(kind) + " file has no header row");
  CsvHeader header(split_csv_line(lines.front()));
  lines.erase(lines.begin());
  return {std::move(header), std::move(lines)};
}

}  // namespace

std::string_view to_string(Region r) {
  switch (r) {
    case Region::WA: return "WA";
    case Region::QLD: return "QLD";
    case Region::VIC: return "VIC";
    case Region::TAS: return "TAS";
    case Region::SA: return "SA";
    case Region::NSW: return "NSW";
    case Region::NT: return "NT";
    case Region::ACT: return "ACT";
  }
  return "?";
}

std::optional<Region> parse_region(std::string_view code) {
  code = trim(code);
  for (Region r : kAllRegions)
    if (to_string(r) == code) return r;
  return std::nullopt;
}

std::size_t DropSummary::dropped() const {
  std::size_t total = 0;
  for (const auto& [cause, n] : by_cause) total += n;
  return total;
}

std::size_t DropSummary::count(const std::string& cause) const {
  auto it = by_cause.find(cause);
  return it == by_cause.end() ? 0 : it->second;
}

Date composite_start(const Date& d) {
  const int doy = day_of_year(d);
  const int k = (doy - 1) / 16;
  const Date jan1{d.year(), std::chrono::January, std::chrono::day(1)};
  return add_days(jan1, 16 * k);
}

std::string format_hhmm(int hhmm) {
  char buf[8];
  std::snprintf(buf, sizeof(buf), "%04d", hhmm);
  return buf;
}

ParseResult<FireEvent> parse_fire_events_text(std::string_view text, const IngestOptions& opts) {
  auto [header, rows] = header_and_rows(text, "fire events");
  const std::size_t c_lat = header.require("latitude", "fire events");
  const std::size_t c_lon = header.require("longitude", "fire events");
  const std::size_t c_date = header.require("acq_date", "fire events");
  const std::size_t c_time = header.require("acq_time", "fire events");
  const std::size_t c_frp = header.require("frp", "fire events");
  const auto c_conf = header.find("confidence");
  // brightness and any other extra columns are ignored.

  ParseResult<FireEvent> out;
  for (auto line : rows) {
    ++out.drops.rows;
    const auto fields = split_csv_line(line);
    RowReader row{fields};
    FireEvent ev;
    const Cell cells[] = {row.number(c_lat, ev.latitude), row.number(c_lon, ev.longitude),
                          row.date(c_date, ev.date), row.number(c_frp, ev.frp)};
    const bool time_missing = row.raw(c_time).empty();
    bool missing = time_missing, bad = false;
    for (Cell c : cells) {
      missing |= c == Cell::kMissing;
      bad |= c == Cell::kBad;
    }
    if (missing) {
      out.drops.add(kDropMissing);
      continue;
    }
    auto hhmm = parse_hhmm(row.raw(c_time));
    if (bad || !hhmm) {
      out.drops.add(kDropUnparseable);
      continue;
    }
    ev.acq_time = *hhmm;
    if (c_conf) {
      auto conf = parse_int(row.raw(*c_conf));
      if (conf && *conf >= 0 && *conf <= 100) ev.confidence = static_cast<int>(*conf);
    }
    if (!valid_coordinates(ev.latitude, ev.longitude) ||
        !opts.bbox.contains(ev.latitude, ev.longitude)) {
      out.drops.add(kDropOutOfBounds);
      continue;
    }
    if (ev.frp < 0.0) {
      out.drops.add(kDropInvalid);
      continue;
    }
    if (!in_window(ev.date, opts)) {
      out.drops.add(kDropOutOfWindow);
      continue;
    }
    out.records.push_back(ev);
  }
  return out;
}

ParseResult<WeatherDay> parse_weather_text(std::string_view text, const IngestOptions& opts) {
  constexpr std::string_view kind = "weather";
  auto [header, rows] = header_and_rows(text, kind);
  const std::size_t c_station = header.require("station_id", kind);
  const std::size_t c_region = header.require("region", kind);
  const std::size_t c_lat = header.require("latitude", kind);
  const std::size_t c_lon = header.require("longitude", kind);
  const std::size_t c_date = header.require("date", kind);
  const std::size_t c_tmin = header.require("tmin", kind);
  const std::size_t c_tmax = header.require("tmax", kind);
  const std::size_t c_tavg = header.require("tavg", kind);
  const std::size_t c_prcp = header.require("prcp", kind);
  const std::size_t c_wspd = header.require("wspd", kind);

  ParseResult<WeatherDay> out;
  for (auto line : rows) {
    ++out.drops.rows;
    const auto fields = split_csv_line(line);
    RowReader row{fields};
    WeatherDay wd;
    wd.station_id = std::string(row.raw(c_station));
    const auto region_code = row.raw(c_region);
    if (wd.station_id.empty() || region_code.empty()) {
      out.drops.add(kDropMissing);
      continue;
    }
    auto region = parse_region(region_code);
    if (!region)
      throw SchemaError("weather file has unknown region code \"" + std::string(region_code) +
                        "\" (expected one of WA, QLD, VIC, TAS, SA, NSW, NT, ACT)");
    wd.region = *region;

    const Cell loc[] = {row.number(c_lat, wd.latitude), row.number(c_lon, wd.longitude),
                        row.date(c_date, wd.date)};
    const Cell vars[] = {row.optional_number(c_tmin, wd.tmin), row.optional_number(c_tmax, wd.tmax),
                         row.optional_number(c_tavg, wd.tavg), row.optional_number(c_prcp, wd.prcp),
                         row.optional_number(c_wspd, wd.wspd)};
    bool missing = false, bad = false, any_var = false;
    for (Cell c : loc) {
      missing |= c == Cell::kMissing;
      bad |= c == Cell::kBad;
    }
    for (Cell c : vars) {
      bad |= c == Cell::kBad;
      any_var |= c == Cell::kOk;
    }
    if (missing || (!bad && !any_var)) {
      out.drops.add(kDropMissing);
      continue;
    }
    if (bad) {
      out.drops.add(kDropUnparseable);
      continue;
    }
    if (!valid_coordinates(wd.latitude, wd.longitude)) {
      out.drops.add(kDropOutOfBounds);
      continue;
    }
    if ((wd.prcp && *wd.prcp < 0.0) || (wd.wspd && *wd.wspd < 0.0)) {
      out.drops.add(kDropInvalid);
      continue;
    }
    if (wd.tmin && wd.tmax && *wd.tmin > *wd.tmax) {
      out.drops.add(kDropInconsistent);
      continue;
    }
    if (!in_window(wd.date, opts)) {
      out.drops.add(kDropOutOfWindow);
      continue;
    }
    out.records.push_back(std::move(wd));
  }
  return out;
}

ParseResult<NdviSample> parse_ndvi_text(std::string_view text, const IngestOptions&) {
  constexpr std::string_view kind = "ndvi";
  auto [header, rows] = header_and_rows(text, kind);
  const std::size_t c_lat = header.require("latitude", kind);
  const std::size_t c_lon = header.require("longitude", kind);
  const std::size_t c_date = header.require("composite_date", kind);
  const std::size_t c_ndvi = header.require("ndvi", kind);

  ParseResult<NdviSample> out;
  for (auto line : rows) {
    ++out.drops.rows;
    const auto fields = split_csv_line(line);
    RowReader row{fields};
    NdviSample s;
    const Cell cells[] = {row.number(c_lat, s.latitude), row.number(c_lon, s.longitude),
                          row.date(c_date, s.composite_date), row.number(c_ndvi, s.ndvi)};
    bool missing = false, bad = false;
    for (Cell c : cells) {
      missing |= c == Cell::kMissing;
      bad |= c == Cell::kBad;
    }
    if (missing) {
      out.drops.add(kDropMissing);
      continue;
    }
    if (bad) {
      out.drops.add(kDropUnparseable);
      continue;
    }
    if (!valid_coordinates(s.latitude, s.longitude)) {
      out.drops.add(kDropOutOfBounds);
      continue;
    }
    if (s.ndvi < -1.0 || s.ndvi > 1.0) {
      out.drops.add(kDropOutOfRange);
      continue;
    }
    s.composite_date = composite_start(s.composite_date);
    out.records.push_back(s);
  }
  return out;
}

ParseResult<FireEvent> parse_fire_events(const std::filesystem::path& path, const IngestOptions& opts) {
  return parse_fire_events_text(read_file(path), opts);
}

ParseResult<WeatherDay> parse_weather(const std::filesystem::path& path, const IngestOptions& opts) {
  return parse_weather_text(read_file(path), opts);
}

ParseResult<NdviSample> parse_ndvi(const std::filesystem::path& path, const IngestOptions& opts) {
  return parse_ndvi_text(read_file(path), opts);
}

namespace {

std::string opt(const std::optional<double>& v) { return v ? format_double(*v) : std::string(); }

}  // namespace

std::string write_fire_events(const std::vector<FireEvent>& events) {
  std::string out = "latitude,longitude,acq_date,acq_time,frp,confidence\n";
  for (const auto& e : events) {
    out += join_csv({format_double(e.latitude), format_double(e.longitude), format_date(e.date),
                     format_hhmm(e.acq_time), format_double(e.frp),
                     e.confidence ? std::to_string(*e.confidence) : std::string()});
    out.push_back('\n');
  }
  return out;
}

std::string write_weather(const std::vector<WeatherDay>& days) {
  std::string out = "station_id,region,latitude,longitude,date,tmin,tmax,tavg,prcp,wspd\n";
  for (const auto& d : days) {
    out += join_csv({d.station_id, std::string(to_string(d.region)), format_double(d.latitude),
                     format_double(d.longitude), format_date(d.date), opt(d.tmin), opt(d.tmax),
                     opt(d.tavg), opt(d.prcp), opt(d.wspd)});
    out.push_back('\n');
  }
  return out;
}

std::string write_ndvi(const std::vector<NdviSample>& samples) {
  std::string out = "latitude,longitude,composite_date,ndvi\n";
  for (const auto& s : samples) {
    out += join_csv({format_double(s.latitude), format_double(s.longitude),
                     format_date(s.composite_date), format_double(s.ndvi)});
    out.push_back('\n');
  }
  return out;
}

}  // namespace bushfire
