// Copyright 2026 the decokin authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "decokin/kinetics.hpp"

// Validity-region boundary curves in the (t, T^{1/2}) plane for the two
// coherence measures. Output is data, not images: the figures these
// correspond to are schematic, so curves are emitted as samples for external
// plotting.
namespace decokin::regimes {

struct TimeRange {
  double t_max = 0.0;  // [s]
  int points = 200;
};

struct RegionCurves {
  // (t [s], T^{1/2} [K^{1/2}]) samples.
  std::vector<std::pair<double, double>> solid;
  std::vector<std::pair<double, double>> dashed;
  std::vector<std::pair<double, double>> dotted;
  double margin = 0.1;
  bool dashed_omitted = false;  // asymptote undefined (zero coefficient)
  bool dotted_omitted = false;
  // Set when the solid curve has a pole at positive time (opposite-sign
  // xi21/xi22 case); samples near the pole are excluded.
  std::optional<double> pole_t;
};

// |rho_el| regime curves:
//   solid : T^{1/2} = margin zeta0 / (|zeta1| |1 - zeta0 t|)
//   dashed: T^{1/2} = margin zeta0 / |zeta1|
//   dotted: T^{1/2} = margin / (|zeta1| t)
// Requires zeta0 > 0 and zeta1 != 0 (degenerate regime otherwise).
RegionCurves fig1_curves(const RateCoefficientSet& coeffs, double margin, const TimeRange& range);

// eta regime curves:
//   solid : T^{1/2} |xi21 + t xi22| = margin |xi1|
//   dashed: T^{1/2} = margin |xi1| / |xi21|
//   dotted: T^{1/2} = margin |xi1| / (|xi22| t)
// Requires xi1 != 0; a vanishing xi21 or xi22 omits the matching asymptote
// with a flag. The pole of the solid curve at t = -xi21/xi22 > 0 is excluded
// within `pole_exclusion` (relative to the pole position).
RegionCurves fig2_curves(const RateCoefficientSet& coeffs, double margin, const TimeRange& range,
                         double pole_exclusion = 1e-3);

}  // namespace decokin::regimes
