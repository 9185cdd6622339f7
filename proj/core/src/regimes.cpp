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

#include "decokin/regimes.hpp"

#include <cmath>
#include <stdexcept>

#include "decokin/errors.hpp"

namespace decokin::regimes {

namespace {
std::vector<double> time_samples(const TimeRange& range) {
  if (!(range.t_max > 0.0) || range.points < 2) {
    throw std::domain_error("regimes: need t_max > 0 and at least 2 points");
  }
  std::vector<double> t(range.points);
  for (int i = 0; i < range.points; ++i) {
    t[i] = range.t_max * static_cast<double>(i) / (range.points - 1);
  }
  return t;
}
}  // namespace

RegionCurves fig1_curves(const RateCoefficientSet& c, double margin, const TimeRange& range) {
  if (!(c.zeta0 > 0.0)) {
    throw ValidationError("fig1_curves: degenerate regime, zeta0 must be > 0");
  }
  if (c.zeta1 == 0.0) {
    throw ValidationError("fig1_curves: degenerate regime, zeta1 must be nonzero");
  }
  RegionCurves out;
  out.margin = margin;
  const double az1 = std::abs(c.zeta1);
  const double dashed_level = margin * c.zeta0 / az1;
  const double pole = 1.0 / c.zeta0;
  for (double t : time_samples(range)) {
    const double denom = std::abs(1.0 - c.zeta0 * t);
    if (denom > 1e-12) out.solid.emplace_back(t, margin * c.zeta0 / (az1 * denom));
    out.dashed.emplace_back(t, dashed_level);
    if (t > 0.0) out.dotted.emplace_back(t, margin / (az1 * t));
  }
  if (pole <= range.t_max) out.pole_t = pole;
  return out;
}

RegionCurves fig2_curves(const RateCoefficientSet& c, double margin, const TimeRange& range,
                         double pole_exclusion) {
  if (c.xi1 == 0.0) {
    throw ValidationError("fig2_curves: degenerate regime, xi1 must be nonzero");
  }
  RegionCurves out;
  out.margin = margin;
  const double ax1 = std::abs(c.xi1);
  if (c.xi21 != 0.0) {
    const double dashed_level = margin * ax1 / std::abs(c.xi21);
    for (double t : time_samples(range)) out.dashed.emplace_back(t, dashed_level);
  } else {
    out.dashed_omitted = true;
  }
  if (c.xi22 != 0.0) {
    for (double t : time_samples(range)) {
      if (t > 0.0) out.dotted.emplace_back(t, margin * ax1 / (std::abs(c.xi22) * t));
    }
  } else {
    out.dotted_omitted = true;
  }
  double pole = -1.0;
  if (c.xi22 != 0.0 && c.xi21 != 0.0 && (c.xi21 > 0.0) != (c.xi22 > 0.0)) {
    pole = -c.xi21 / c.xi22;
    if (pole > 0.0 && pole <= range.t_max) out.pole_t = pole;
  }
  for (double t : time_samples(range)) {
    const double denom = std::abs(c.xi21 + t * c.xi22);
    if (pole > 0.0 && std::abs(t - pole) < pole_exclusion * pole) continue;
    if (denom == 0.0) continue;
    out.solid.emplace_back(t, margin * ax1 / denom);
  }
  return out;
}

}  // namespace decokin::regimes
