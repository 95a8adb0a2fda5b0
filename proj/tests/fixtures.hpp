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


// Seeded random instances shared by the unit tests and the acceptance
// runner.

#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "bushfire/common.hpp"
#include "bushfire/ingest.hpp"
#include "bushfire/random.hpp"
#include "bushfire/text.hpp"

namespace fixture {

struct JoinInstance {
  std::vector<bushfire::FireEvent> events;
  std::vector<bushfire::WeatherDay> weather;
  std::vector<bushfire::NdviSample> ndvi;
};

// Stations, events and NDVI points on a 0.005 degree lattice inside a one
// degree box, so equal distances, zero distances, missing variables and
// duplicate station-days all occur.
inline JoinInstance random_join_instance(std::uint64_t seed, std::size_t max_stations = 500,
                                         std::size_t max_events = 2000) {
  using namespace bushfire;
  Rng rng(seed);
  JoinInstance inst;
  const std::size_t n_stations = 1 + rng.below(max_stations);
  const std::size_t n_events = 1 + rng.below(max_events);
  const Date day0 = parse_date("2019-11-20").value();
  auto lattice = [&](double lo) { return lo + 0.005 * double(rng.below(201)); };

  struct Site {
    double lat, lon;
  };
  std::vector<Site> stations;
  for (std::size_t s = 0; s < n_stations; ++s) stations.push_back({lattice(-34.0), lattice(150.0)});
  const Region regions[] = {Region::NSW, Region::VIC, Region::QLD};
  for (std::size_t s = 0; s < n_stations; ++s) {
    const std::string id = "ST" + std::to_string(1000 + rng.below(9000)) + "_" + std::to_string(s);
    const Region region = regions[rng.below(3)];
    for (int d = 0; d < 12; ++d) {
      if (rng.bernoulli(0.15)) continue;
      const int copies = rng.bernoulli(0.03) ? 2 : 1;
      for (int c = 0; c < copies; ++c) {
        WeatherDay w;
        w.station_id = id;
        w.region = region;
        w.latitude = stations[s].lat;
        w.longitude = stations[s].lon;
        w.date = add_days(day0, d);
        auto maybe = [&](double v) -> std::optional<double> {
          return rng.bernoulli(0.05) ? std::nullopt : std::optional<double>(v);
        };
        const double tmin = rng.normal(15, 5);
        w.tmin = maybe(tmin);
        w.tmax = maybe(tmin + 5 + rng.uniform() * 10);
        w.tavg = maybe(tmin + 4);
        w.prcp = maybe(rng.bernoulli(0.6) ? 0.0 : rng.exponential(5));
        w.wspd = maybe(std::abs(rng.normal(12, 5)));
        inst.weather.push_back(std::move(w));
      }
    }
  }

  std::vector<Site> ndvi_sites;
  const std::size_t n_ndvi = 1 + rng.below(400);
  for (std::size_t i = 0; i < n_ndvi; ++i) ndvi_sites.push_back({lattice(-34.0), lattice(150.0)});
  for (const auto& site : ndvi_sites) {
    for (int k = -2; k <= 2; ++k) {
      if (rng.bernoulli(0.3)) continue;
      NdviSample s;
      s.latitude = site.lat;
      s.longitude = site.lon;
      s.composite_date = add_days(day0, 16 * k + int(rng.below(16)));
      s.ndvi = std::clamp(rng.normal(0.4, 0.2), -1.0, 1.0);
      inst.ndvi.push_back(s);
    }
  }

  for (std::size_t e = 0; e < n_events; ++e) {
    FireEvent ev;
    if (rng.bernoulli(0.05)) {
      const auto& s = stations[rng.below(stations.size())];
      ev.latitude = s.lat;
      ev.longitude = s.lon;
    } else {
      ev.latitude = lattice(-34.0);
      ev.longitude = lattice(150.0);
    }
    ev.date = add_days(day0, int(rng.below(13)));
    ev.acq_time = int(rng.below(24)) * 100 + int(rng.below(60));
    ev.frp = rng.exponential(40);
    inst.events.push_back(ev);
  }
  return inst;
}

}  // namespace fixture
