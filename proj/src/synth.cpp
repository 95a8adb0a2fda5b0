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

#include "bushfire/synth.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>

#include "bushfire/random.hpp"
#include "bushfire/text.hpp"

namespace bushfire {

void SynthSpec::validate() const {
  if (!(ratio > 0.0 && ratio < 1.0)) throw PreconditionError("synth: ratio must be in (0, 1)");
  if (rows < 2) throw PreconditionError("synth: need at least two rows");
  if (!(signal >= 0.0)) throw PreconditionError("synth: signal must be >= 0");
}

namespace {

struct RegionInfo {
  Region region;
  double weight, lat, lon, spread;
};

constexpr RegionInfo kRegions[] = {
    {Region::NSW, 0.25, -32.5, 149.5, 1.5}, {Region::QLD, 0.20, -24.0, 150.0, 1.5},
    {Region::WA, 0.15, -30.0, 116.5, 1.5},  {Region::VIC, 0.15, -37.5, 145.0, 1.5},
    {Region::NT, 0.10, -14.0, 132.5, 1.5},  {Region::SA, 0.08, -33.5, 138.5, 1.5},
    {Region::TAS, 0.05, -42.0, 146.5, 0.8}, {Region::ACT, 0.02, -35.4, 149.0, 0.8},
};

const RegionInfo& draw_region(Rng& rng) {
  double u = rng.uniform();
  for (const auto& r : kRegions) {
    if (u < r.weight) return r;
    u -= r.weight;
  }
  return kRegions[0];
}

double season_of(int month) { return std::cos(2.0 * std::numbers::pi * (month - 1) / 12.0); }

double sigmoid(double s) { return 1.0 / (1.0 + std::exp(-s)); }

Date draw_date(Rng& rng) {
  const int year = 2015 + static_cast<int>(rng.below(9));
  const unsigned month = 1 + static_cast<unsigned>(rng.below(12));
  const unsigned day = 1 + static_cast<unsigned>(rng.below(28));
  return Date{std::chrono::year(year), std::chrono::month(month), std::chrono::day(day)};
}

WeatherVars draw_weather(Rng& rng, int month) {
  const double s = season_of(month);
  WeatherVars w;
  w.tmin = rng.normal(12.0 + 6.0 * s, 4.0);
  const double range = std::max(0.5, rng.normal(11.0 + 2.0 * s, 4.0));
  w.tmax = w.tmin + range;
  w.tavg = w.tmin + range / 2.0;
  w.prcp = rng.bernoulli(0.7) ? 0.0 : rng.exponential(6.0);
  w.wspd = std::abs(rng.normal(14.0, 6.0));
  return w;
}

double draw_ndvi(Rng& rng) { return std::clamp(rng.normal(0.45, 0.15), -1.0, 1.0); }

double draw_frp(Rng& rng, bool high) { return high ? 40.01 + rng.exponential(35.0) : 40.0 - 39.5 * rng.uniform(); }

// Intercept b with mean(sigmoid(b + signal * lin)) == ratio.
double solve_intercept(const std::vector<double>& lin, double signal, double ratio) {
  double lo = -40.0, hi = 40.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    double mean = 0.0;
    for (double v : lin) mean += sigmoid(mid + signal * v);
    mean /= static_cast<double>(lin.size());
    (mean < ratio ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

double synth_linear_term(const FusedRecord& r) {
  const int month = static_cast<int>(static_cast<unsigned>(r.event.date.month()));
  const double zr = (r.weather.tmax - r.weather.tmin - 11.0) / 4.0;
  const double zw = (r.weather.wspd - 14.0) / 6.0;
  const double zn = (r.ndvi - 0.45) / 0.15;
  const double wet = r.weather.prcp > 0.0 ? 1.0 : 0.0;
  return 0.9 * zr + 0.6 * zw - 0.7 * zn - 0.8 * wet + 0.5 * zr * zw - 0.4 * wet * zn + 0.6 * season_of(month);
}

SynthResult synth_fused(const SynthSpec& spec) {
  spec.validate();
  Rng rng(derive_seed(spec.seed, 0x5717u));
  SynthResult out;
  out.records.resize(spec.rows);
  for (auto& r : out.records) {
    const auto& reg = draw_region(rng);
    r.region = reg.region;
    r.event.latitude = reg.lat + rng.uniform(-reg.spread, reg.spread);
    r.event.longitude = reg.lon + rng.uniform(-reg.spread, reg.spread);
    r.event.date = draw_date(rng);
    const int hour = static_cast<int>(rng.below(24));
    r.event.acq_time = hour * 100 + static_cast<int>(rng.below(60));
    r.event.confidence = static_cast<int>(rng.below(101));
    r.weather = draw_weather(rng, static_cast<int>(static_cast<unsigned>(r.event.date.month())));
    r.ndvi = draw_ndvi(rng);
    r.distance_m = 5000.0 * std::sqrt(rng.uniform());
    r.ndvi_lag_days = static_cast<int>(rng.below(17)) - 8;
  }
  std::vector<double> lin;
  lin.reserve(spec.rows);
  for (const auto& r : out.records) lin.push_back(synth_linear_term(r));
  out.intercept = solve_intercept(lin, spec.signal, spec.ratio);
  for (std::size_t i = 0; i < spec.rows; ++i) {
    const double p = sigmoid(out.intercept + spec.signal * lin[i]);
    out.p_high.push_back(p);
    out.records[i].event.frp = draw_frp(rng, rng.bernoulli(p));
  }
  return out;
}

SynthRaw synth_raw(const SynthSpec& spec) {
  spec.validate();
  Rng rng(derive_seed(spec.seed, 0x5A17u));

  // Stations scattered around each region centre.
  struct Station {
    std::string id;
    const RegionInfo* region;
    double lat, lon;
  };
  std::vector<Station> stations;
  for (const auto& reg : kRegions) {
    const int n = std::max(2, static_cast<int>(std::lround(reg.weight * 40)));
    for (int k = 0; k < n; ++k) {
      char id[16];
      std::snprintf(id, sizeof id, "%s%03d", std::string(to_string(reg.region)).c_str(), k);
      stations.push_back({id, &reg, reg.lat + rng.uniform(-reg.spread, reg.spread),
                          reg.lon + rng.uniform(-reg.spread, reg.spread)});
    }
  }

  std::vector<FireEvent> events;
  std::map<std::pair<std::size_t, int>, WeatherDay> weather;  // (station, serial day)
  std::vector<NdviSample> ndvi;
  std::vector<double> lin;
  const double km_per_deg = 111.2;
  for (std::size_t i = 0; i < spec.rows; ++i) {
    const std::size_t s = rng.below(stations.size());
    const auto& st = stations[s];
    FireEvent e;
    // Within 3 km of the station.
    const double r_km = 3.0 * std::sqrt(rng.uniform());
    const double theta = rng.uniform(0.0, 2.0 * std::numbers::pi);
    e.latitude = st.lat + r_km * std::sin(theta) / km_per_deg;
    e.longitude = st.lon + r_km * std::cos(theta) / (km_per_deg * std::cos(st.lat * std::numbers::pi / 180.0));
    e.date = draw_date(rng);
    e.acq_time = static_cast<int>(rng.below(24)) * 100 + static_cast<int>(rng.below(60));
    e.confidence = static_cast<int>(rng.below(101));
    const int serial = std::chrono::sys_days(e.date).time_since_epoch().count();
    auto [it, inserted] = weather.try_emplace({s, serial});
    if (inserted) {
      const WeatherVars w = draw_weather(rng, static_cast<int>(static_cast<unsigned>(e.date.month())));
      it->second = WeatherDay{st.id, st.region->region, st.lat, st.lon, e.date, w.tmin, w.tmax, w.tavg, w.prcp, w.wspd};
    }
    const double value = draw_ndvi(rng);
    const Date start = composite_start(e.date);
    ndvi.push_back({e.latitude, e.longitude, start, value});
    ndvi.push_back({e.latitude, e.longitude, add_days(start, 16), std::clamp(value + rng.normal(0.0, 0.02), -1.0, 1.0)});

    FusedRecord approx;
    approx.event = e;
    const auto& wd = it->second;
    approx.weather = {*wd.tmin, *wd.tmax, *wd.tavg, *wd.prcp, *wd.wspd};
    approx.ndvi = value;
    lin.push_back(synth_linear_term(approx));
    events.push_back(e);
  }
  const double b = solve_intercept(lin, spec.signal, spec.ratio);
  for (std::size_t i = 0; i < events.size(); ++i)
    events[i].frp = draw_frp(rng, rng.bernoulli(sigmoid(b + spec.signal * lin[i])));

  // Fires with no station nearby, excluded at fusion.
  for (int k = 0; k < 3; ++k) {
    FireEvent e = events[static_cast<std::size_t>(k)];
    e.latitude = -20.0 - k;
    e.longitude = 124.0;
    events.push_back(e);
  }

  std::vector<WeatherDay> days;
  for (auto& [key, day] : weather) days.push_back(day);

  SynthRaw raw;
  raw.fire_csv = write_fire_events(events);
  raw.weather_csv = write_weather(days);
  raw.ndvi_csv = write_ndvi(ndvi);
  // Malformed rows: missing value, unparseable date, out of bounds.
  raw.fire_csv += ",150.1,2019-01-05,0130,12.5,80\n";
  raw.fire_csv += "-33.1,150.1,2019-13-45,0130,12.5,80\n";
  raw.fire_csv += "-5.0,150.1,2019-01-05,0130,12.5,80\n";
  raw.weather_csv += "NSW000,NSW,-32.5,149.5,2019-01-05,30,20,25,0,10\n";  // tmin > tmax
  raw.ndvi_csv += "-33.0,150.0,2019-01-01,1.7\n";                         // out of range
  return raw;
}

}  // namespace bushfire
