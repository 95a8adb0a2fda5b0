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

#include "bushfire/geo.hpp"

#include <algorithm>

namespace bushfire {

namespace {

constexpr double kKmPerDegree = kEarthRadiusKm * std::numbers::pi / 180.0;

}  // namespace

GeoGrid::GeoGrid(std::vector<LatLonD> points, double cell_km) : points_(std::move(points)) {
  if (!(cell_km > 0.0)) throw PreconditionError("GeoGrid: cell size must be positive");
  cell_deg_ = std::min(cell_km / kKmPerDegree, 180.0);
  rows_ = static_cast<int>(std::ceil(180.0 / cell_deg_)) + 1;
  cols_ = static_cast<int>(std::ceil(360.0 / cell_deg_));
  for (std::size_t i = 0; i < points_.size(); ++i) {
    const int r = static_cast<int>(std::floor((points_[i].lat + 90.0) / cell_deg_));
    const int c = static_cast<int>(std::floor((points_[i].lon + 180.0) / cell_deg_)) % cols_;
    cells_[key(r, c)].push_back(i);
  }
}

template <class Visit>
void GeoGrid::visit_candidates(const LatLonD& p, double radius_km, Visit&& visit) const {
  // Meridian arcs are great circles, so |Δlat| <= radius / km-per-degree.
  // A 1e-9 relative margin absorbs rounding at the boundary.
  const double dlat = radius_km / kKmPerDegree * (1.0 + 1e-9) + 1e-12;
  const double lat_lo = p.lat - dlat;
  const double lat_hi = p.lat + dlat;
  const int r_lo = std::max(0, static_cast<int>(std::floor((lat_lo + 90.0) / cell_deg_)));
  const int r_hi = std::min(rows_ - 1, static_cast<int>(std::floor((lat_hi + 90.0) / cell_deg_)));

  // Longitude half-width: asin(sin δ / cos φ) for the worst latitude in the
  // band; the whole ring when the band reaches a pole.
  const double delta = dlat * std::numbers::pi / 180.0;
  const double worst_lat = std::max(std::abs(lat_lo), std::abs(lat_hi));
  bool all_cols = worst_lat >= 90.0 || delta >= std::numbers::pi / 2.0;
  double dlon = 360.0;
  if (!all_cols) {
    const double ratio = std::sin(delta) / std::cos(worst_lat * std::numbers::pi / 180.0);
    if (ratio >= 1.0) {
      all_cols = true;
    } else {
      dlon = std::asin(ratio) * 180.0 / std::numbers::pi * (1.0 + 1e-9) + 1e-12;
    }
  }
  int c_lo = 0, c_hi = cols_ - 1;
  if (!all_cols) {
    c_lo = static_cast<int>(std::floor((p.lon - dlon + 180.0) / cell_deg_));
    c_hi = static_cast<int>(std::floor((p.lon + dlon + 180.0) / cell_deg_));
    if (c_hi - c_lo + 1 >= cols_) {
      c_lo = 0;
      c_hi = cols_ - 1;
      all_cols = true;
    }
  }
  for (int r = r_lo; r <= r_hi; ++r) {
    for (int c = c_lo; c <= c_hi; ++c) {
      const int wrapped = ((c % cols_) + cols_) % cols_;
      auto it = cells_.find(key(r, wrapped));
      if (it == cells_.end()) continue;
      for (std::size_t idx : it->second) visit(idx);
    }
  }
}

std::vector<Neighbor> GeoGrid::within(const LatLonD& p, double radius_km) const {
  std::vector<Neighbor> out;
  visit_candidates(p, radius_km, [&](std::size_t idx) {
    const double d = haversine_km(p, points_[idx]);
    if (d <= radius_km) out.push_back({idx, d});
  });
  std::sort(out.begin(), out.end(), [](const Neighbor& a, const Neighbor& b) {
    return a.distance_km != b.distance_km ? a.distance_km < b.distance_km : a.index < b.index;
  });
  return out;
}

std::optional<Neighbor> GeoGrid::nearest_within(const LatLonD& p, double radius_km) const {
  std::optional<Neighbor> best;
  visit_candidates(p, radius_km, [&](std::size_t idx) {
    const double d = haversine_km(p, points_[idx]);
    if (d > radius_km) return;
    if (!best || d < best->distance_km || (d == best->distance_km && idx < best->index))
      best = Neighbor{idx, d};
  });
  return best;
}

}  // namespace bushfire
