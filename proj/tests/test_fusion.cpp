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


#include <gtest/gtest.h>

#include "bushfire/fusion.hpp"
#include "bushfire/geo.hpp"
#include "bushfire/random.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

using namespace bushfire;

TEST(Haversine, MatchesTextbookFormula) {
  Rng rng(1);
  for (int i = 0; i < 2000; ++i) {
    const LatLonD a{rng.uniform(-60, 0), rng.uniform(100, 170)};
    const LatLonD b{rng.uniform(-60, 0), rng.uniform(100, 170)};
    const double d = haversine_km(a, b);
    EXPECT_NEAR(d, oracle::great_circle_km(a.lat, a.lon, b.lat, b.lon), 1e-9 * std::max(1.0, d));
    EXPECT_EQ(d, haversine_km(b, a));
  }
  // One degree of latitude.
  EXPECT_NEAR(haversine_km(LatLonD{0, 0}, LatLonD{1, 0}), 6371.0088 * std::numbers::pi / 180, 1e-9);
  EXPECT_EQ(haversine_km(LatLonD{-33, 151}, LatLonD{-33, 151}), 0.0);
}

TEST(Haversine, TemplatedOnScalar) {
  const LatLon<float> a{-33.0f, 151.0f}, b{-33.1f, 151.1f};
  EXPECT_NEAR(haversine_km(a, b), haversine_km(LatLonD{-33.0, 151.0}, LatLonD{-33.1, 151.1}), 1e-2);
}

TEST(Idw, WorkedExample) {
  EXPECT_EQ(idw<double>({{1.0, 0.0}, {2.0, 30.0}}), 6.0);
}

TEST(Idw, Properties) {
  Rng rng(2);
  for (int trial = 0; trial < 10000; ++trial) {
    const std::size_t n = 1 + rng.below(8);
    std::vector<DistanceValue<double>> s(n);
    for (auto& v : s) v = {rng.uniform(0.001, 5.0), rng.normal(10, 20)};
    const double r = idw<double>(s);
    double lo = s[0].value, hi = s[0].value;
    for (const auto& v : s) lo = std::min(lo, v.value), hi = std::max(hi, v.value);
    EXPECT_GE(r, lo);
    EXPECT_LE(r, hi);
    EXPECT_EQ(idw<double>({s[0]}), s[0].value);
    auto z = s;
    const std::size_t k = rng.below(n);
    z[k].distance = 0.0;
    EXPECT_EQ(idw<double>(z), z[k].value);
  }
}

TEST(Idw, EigenOverloadAndErrors) {
  Eigen::Vector2d d(1.0, 2.0), v(0.0, 30.0);
  EXPECT_EQ(idw(d, v), 6.0);
  EXPECT_EQ(idw(d, v, 1.0), 10.0);
  EXPECT_THROW(idw<double>(std::span<const DistanceValue<double>>{}), PreconditionError);
  EXPECT_THROW(idw<double>({{-1.0, 1.0}}), PreconditionError);
}

TEST(GeoGrid, AgreesWithLinearScan) {
  Rng rng(4);
  std::vector<LatLonD> pts;
  for (int i = 0; i < 3000; ++i) pts.push_back({rng.uniform(-44, -10), rng.uniform(113, 154)});
  const GeoGrid grid(pts, 5.0);
  for (int q = 0; q < 300; ++q) {
    const LatLonD p = q % 3 == 0 ? pts[rng.below(pts.size())] : LatLonD{rng.uniform(-44, -10), rng.uniform(113, 154)};
    const double radius = q % 2 ? 5.0 : 60.0;
    std::vector<Neighbor> expect;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      const double d = haversine_km(p, pts[i]);
      if (d <= radius) expect.push_back({i, d});
    }
    std::sort(expect.begin(), expect.end(), [](const Neighbor& a, const Neighbor& b) {
      return a.distance_km != b.distance_km ? a.distance_km < b.distance_km : a.index < b.index;
    });
    EXPECT_EQ(grid.within(p, radius), expect);
    const auto nearest = grid.nearest_within(p, radius);
    ASSERT_EQ(nearest.has_value(), !expect.empty());
    if (nearest) EXPECT_EQ(*nearest, expect.front());
  }
}

TEST(MatchNdvi, ClosestWithEarlierTieBreak) {
  const Date ev = parse_date("2020-01-20").value();
  std::vector<NdviSample> s = {{-33, 151, parse_date("2020-01-28").value(), 0.8},
                               {-33, 151, parse_date("2020-01-12").value(), 0.2}};
  const auto m = match_ndvi(s, ev, 8);
  ASSERT_TRUE(m);
  EXPECT_EQ(m->ndvi, 0.2);
  EXPECT_EQ(m->lag_days, -8);
  EXPECT_FALSE(match_ndvi(s, ev, 7));
}

TEST(Fuse, MatchesLinearScanJoin) {
  for (std::uint64_t seed = 0; seed < 8; ++seed) {
    const auto inst = fixture::random_join_instance(derive_seed(77, seed), 200, 600);
    const auto got = fuse(inst.events, inst.weather, inst.ndvi);
    const auto want = oracle::linear_scan_join(inst.events, inst.weather, inst.ndvi, 5.0, 2.0, 8, 2.5);
    ASSERT_EQ(got.records.size(), want.rows.size()) << "seed " << seed;
    for (std::size_t i = 0; i < want.rows.size(); ++i) {
      const auto& g = got.records[i];
      const auto& w = want.rows[i];
      EXPECT_EQ(g.event, inst.events[w.event]);
      EXPECT_EQ(g.region, w.region);
      EXPECT_EQ(g.weather, (WeatherVars{w.tmin, w.tmax, w.tavg, w.prcp, w.wspd}));
      EXPECT_EQ(g.distance_m, w.distance_m);
      EXPECT_EQ(g.ndvi, w.ndvi);
      EXPECT_EQ(g.ndvi_lag_days, w.lag);
      EXPECT_LE(g.distance_m, 5000.0);
      EXPECT_LE(std::abs(g.ndvi_lag_days), 8);
    }
    for (const auto& [cause, n] : want.excluded) EXPECT_EQ(got.exclusions.count(cause), n) << cause;
    EXPECT_EQ(got.exclusions.events, inst.events.size());
    EXPECT_EQ(got.exclusions.fused + got.exclusions.excluded(), got.exclusions.events);
  }
}

TEST(Fuse, ThreadCountDoesNotChangeOutput) {
  const auto inst = fixture::random_join_instance(5, 300, 1500);
  FusionConfig one, many;
  many.threads = 8;
  EXPECT_EQ(fuse(inst.events, inst.weather, inst.ndvi, one).records,
            fuse(inst.events, inst.weather, inst.ndvi, many).records);
}

TEST(Fuse, ExclusionCausesAlwaysListed) {
  const auto r = fuse({}, {}, {});
  EXPECT_EQ(r.exclusions.count(kExcludeNoStation), 0u);
  EXPECT_NE(r.exclusions.to_json().find(kExcludeNoNdvi), std::string::npos);
}

TEST(Fuse, FusedFileRoundTrips) {
  const auto inst = fixture::random_join_instance(9, 100, 400);
  const auto r = fuse(inst.events, inst.weather, inst.ndvi);
  ASSERT_FALSE(r.records.empty());
  EXPECT_EQ(parse_fused_text(write_fused(r.records)).records, r.records);
}
