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

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "decokin/kinetics.hpp"
#include "decokin/oracle.hpp"
#include "decokin/scattering.hpp"

namespace decokin {

// Scenario description, loaded from the INI-style config dialect documented
// in the README: [section] headers, key = value pairs, '#' comments. Masses
// accept a 'u' or 'kg' suffix, channel lengths a per-channel unit in
// {nm, bohr, m}. All unit conversion to SI happens once, at load time.
struct ScenarioConfig {
  BathSpec bath;
  // Optional temperature sweep (overrides bath.T when active).
  struct Sweep {
    double start = 0.0, stop = 0.0;
    int points = 0;
    bool log_scale = true;
  };
  std::optional<Sweep> t_sweep;

  ChannelPair pair;

  struct Run {
    std::optional<double> t_max;  // [s]; default 5/zeta0
    int t_points = 200;
    TruncationOrder order = TruncationOrder::T1;
    double margin = 0.1;
    double ref_length = 1e-9;  // [m]
    bool oracle = false;
  } run;

  struct OracleParams {
    oracle::GridParams grid;
    oracle::KernelQuad quad;
    double dt = 0.0;  // 0 = automatic
    int threads = 1;
    double compare_tol = 1e-2;  // flagging threshold for series-vs-oracle residuals
  } oracle;

  std::vector<double> temperatures() const;
  std::vector<double> time_grid(double zeta0) const;
};

// Parses and fully validates a config; unit conversions applied, defaults
// filled in. Unknown keys are errors in strict mode and collected warnings
// otherwise. Errors carry file:line positions.
ScenarioConfig load_config(const std::filesystem::path& path, bool strict = false,
                           std::vector<std::string>* warnings = nullptr);
ScenarioConfig parse_config(const std::string& text, const std::string& source_name,
                            bool strict = false, std::vector<std::string>* warnings = nullptr);

// Canonical serialization (SI units); load(serialize(c)) == c.
std::string serialize_config(const ScenarioConfig& config);

}  // namespace decokin
