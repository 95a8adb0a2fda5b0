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

// Great-circle distance, a radius-query grid index and inverse-distance
// weighting.

#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

#include <Eigen/Core>

#include "bushfire/common.hpp"

namespace bushfire {

inline constexpr double kEarthRadiusKm = 6371.0088;

template <typename Scalar>
struct LatLon {
  Scalar lat;
  Scalar lon;
};

using LatLonD = LatLon<double>;

// Haversine distance on a sphere of radius kEarthRadiusKm. |Δφ| and |Δλ| are
// used so that the result is bit-identical under argument swap.
template <typename Scalar>
Scalar haversine_km(const LatLon<Scalar>& a, const LatLon<Scalar>& b) {
  using std::abs;
  using std::asin;
  using std::cos;
  using std::min;
  using std::sin;
  using std::sqrt;
  const Scalar deg = Scalar(std::numbers::pi) / Scalar(180);
  const Scalar dphi = abs(b.lat - a.lat) * deg;
  const Scalar dlambda = abs(b.lon - a.lon) * deg;
  const Scalar s1 = sin(dphi / Scalar(2));
  const Scalar s2 = sin(dlambda / Scalar(2));
  const Scalar h = s1 * s1 + cos(a.lat * deg) * cos(b.lat * deg) * s2 * s2;
  return Scalar(2) * Scalar(kEarthRadiusKm) * asin(min(Scalar(1), sqrt(h)));
}

template <typename Scalar>
struct DistanceValue {
  Scalar distance;
  Scalar value;
};

// Inverse-distance weighted mean, weights d^-power. A zero-distance entry
// short-circuits to its value (first such entry wins).
template <typename Scalar>
Scalar idw(std::span<const DistanceValue<Scalar>> samples, Scalar power = Scalar(2)) {
  if (samples.empty()) throw PreconditionError("idw: empty sample list");
  using std::pow;
  for (const auto& s : samples) {
    if (s.distance < Scalar(0)) throw PreconditionError("idw: negative distance");
    if (s.distance == Scalar(0)) return s.value;
  }
  if (samples.size() == 1) return samples.front().value;
  Scalar num(0), den(0), lo = samples.front().value, hi = samples.front().value;
  for (const auto& s : samples) {
    const Scalar w = pow(s.distance, -power);
    num += w * s.value;
    den += w;
    lo = s.value < lo ? s.value : lo;
    hi = s.value > hi ? s.value : hi;
  }
  // Rounding can push the quotient a few ulps outside the sample range.
  const Scalar r = num / den;
  return r < lo ? lo : (r > hi ? hi : r);
}

template <typename Scalar>
Scalar idw(std::initializer_list<DistanceValue<Scalar>> samples, Scalar power = Scalar(2)) {
  return idw(std::span<const DistanceValue<Scalar>>(samples.begin(), samples.size()), power);
}

// Expression-friendly overload over two aligned vectors.
template <typename DerivedD, typename DerivedV>
typename DerivedV::Scalar idw(const Eigen::DenseBase<DerivedD>& distances,
                              const Eigen::DenseBase<DerivedV>& values,
                              typename DerivedV::Scalar power = 2) {
  using Scalar = typename DerivedV::Scalar;
  std::vector<DistanceValue<Scalar>> s(static_cast<std::size_t>(values.size()));
  for (Eigen::Index i = 0; i < values.size(); ++i)
    s[static_cast<std::size_t>(i)] = {static_cast<Scalar>(distances(i)), values(i)};
  return idw(std::span<const DistanceValue<Scalar>>(s), power);
}

struct Neighbor {
  std::size_t index;
  double distance_km;

  bool operator==(const Neighbor&) const = default;
};

// Fixed geographic grid over lat/lon points answering exact radius queries.
// Cells are square in degrees; the query widens its longitude span with
// latitude so no point within the radius is missed.
class GeoGrid {
 public:
  GeoGrid() = default;
  GeoGrid(std::vector<LatLonD> points, double cell_km);

  // Points with haversine(p, point) <= radius_km, ascending by distance then
  // insertion index.
  std::vector<Neighbor> within(const LatLonD& p, double radius_km) const;
  std::optional<Neighbor> nearest_within(const LatLonD& p, double radius_km) const;

  std::size_t size() const { return points_.size(); }
  const LatLonD& point(std::size_t i) const { return points_[i]; }

 private:
  std::int64_t key(int row, int col) const {
    return static_cast<std::int64_t>(row) * static_cast<std::int64_t>(cols_) + col;
  }
  template <class Visit>
  void visit_candidates(const LatLonD& p, double radius_km, Visit&& visit) const;

  std::vector<LatLonD> points_;
  double cell_deg_ = 1.0;
  int rows_ = 1;
  int cols_ = 1;
  std::unordered_map<std::int64_t, std::vector<std::size_t>> cells_;
};

}  // namespace bushfire
