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

// Seeded synthetic data with a planted fire-intensity signal.
//
// Per record (all draws from one mt19937_64 stream, in this order):
//   region        categorical: NSW .25, QLD .20, WA .15, VIC .15, NT .10,
//                 SA .08, TAS .05, ACT .02; location = region centre plus
//                 U(-1.5, 1.5) degrees on each axis (0.8 for TAS and ACT)
//   date          year U{2015..2023}, month U{1..12}, day U{1..28}
//   acq_time      hour U{0..23}, minute U{0..59}; confidence U{0..100}
//   season        s = cos(2*pi*(month - 1) / 12)   (+1 in January)
//   tmin          N(12 + 6s, 4)
//   range         max(0.5, N(11 + 2s, 4)); tmax = tmin + range
//   tavg          tmin + range / 2
//   prcp          0 with probability 0.7, else Exp(mean 6)
//   wspd          |N(14, 6)|
//   ndvi          clamp(N(0.45, 0.15), -1, 1)
//   distance_m    5000 * sqrt(U)
//   ndvi lag      U{-8..8}
//
// With zr = (range - 11)/4, zw = (wspd - 14)/6, zn = (ndvi - 0.45)/0.15 and
// wet = [prcp > 0]:
//   lin = 0.9 zr + 0.6 zw - 0.7 zn - 0.8 wet + 0.5 zr zw - 0.4 wet zn + 0.6 s
//   P(high) = sigmoid(b + signal * lin)
// where b is found by bisection so that the mean P(high) over the generated
// rows equals `ratio`. The label is Bernoulli(P(high)) drawn after all
// covariates; high rows get FRP = 40.01 + Exp(mean 35), low rows
// FRP = 40 - 39.5 U.

#pragma once

#include <string>
#include <vector>

#include "bushfire/fusion.hpp"

namespace bushfire {

struct SynthSpec {
  std::size_t rows = 500;
  double ratio = 0.053;  // target share of high-intensity rows
  double signal = 1.0;   // 0 gives labels independent of the covariates
  std::uint64_t seed = 0;

  void validate() const;
};

struct SynthResult {
  std::vector<FusedRecord> records;
  std::vector<double> p_high;  // planted probability per row
  double intercept = 0.0;
};

double synth_linear_term(const FusedRecord& r);

SynthResult synth_fused(const SynthSpec& spec);

// Raw ingest inputs (fire, weather and NDVI CSV text) whose fusion yields
// roughly spec.rows events. A few malformed rows of each kind are mixed in
// to exercise the drop accounting.
struct SynthRaw {
  std::string fire_csv;
  std::string weather_csv;
  std::string ndvi_csv;
};

SynthRaw synth_raw(const SynthSpec& spec);

}  // namespace bushfire
