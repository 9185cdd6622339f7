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

#include "decokin/config.hpp"
#include "decokin/lightbath.hpp"

namespace decokin {

struct ArtifactSelection {
  bool rates = true;
  bool trace = true;
  bool regimes = true;
  bool oracle = false;  // ORed with config.run.oracle
};

struct ScenarioResult {
  std::vector<std::filesystem::path> written;
  // Largest |rho_el| and eta residuals between the series and the oracle
  // (set only when the oracle ran).
  std::optional<double> max_abs_rho_residual;
  std::optional<double> max_eta_residual;
  RateCoefficientSet coeffs;  // at bath.T (first sweep point when sweeping)
};

// Runs a scenario and writes the CSV artifacts into out_dir:
//   rates.csv           coefficient table, one row per temperature
//   coherence_trace.csv series traces per truncation order (single T only)
//   regimes.csv         validity-region curve samples
//   oracle_trace.csv    sampled oracle evolution (when the oracle is on)
//   comparison.csv      series-vs-oracle residuals (when the oracle is on)
// Identical configs produce byte-identical files for any thread count.
ScenarioResult run_scenario(const ScenarioConfig& config, const std::filesystem::path& out_dir,
                            const ArtifactSelection& select = {});

struct InversionReport {
  lightbath::InversionResult result;
  std::vector<double> temperatures;
  std::vector<bool> within_validity;  // per measurement, eta T-condition at margin
  std::filesystem::path report_path;
};

// Reads measurement rows (T [K], lambda2 [1/s], optional sigma [1/s]) and
// inverts for alpha_nu_prime; writes inversion_report.csv into out_dir.
InversionReport invert_from_csv(const ScenarioConfig& config,
                                const std::filesystem::path& measurements_csv,
                                const std::filesystem::path& out_dir,
                                std::optional<int> prior_sign = std::nullopt);

}  // namespace decokin
