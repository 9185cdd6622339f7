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

#include "decokin/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <memory>

#include "decokin/csv.hpp"
#include "decokin/errors.hpp"
#include "decokin/oracle.hpp"
#include "decokin/regimes.hpp"

namespace decokin {

namespace {

csv::Table rates_table(const ScenarioConfig& cfg) {
  csv::Table t;
  t.header = {"T [K]",
              "zeta0 [1/s]",
              "zeta1 [1/(s sqrtK)]",
              "zeta21 [1/(s K)]",
              "zeta22 [1/(s^2 K)]",
              "xi1 [1/(s sqrtK)]",
              "xi21 [1/(s K)]",
              "xi22 [1/(s^2 K)]",
              "re_z0 [1/s]",
              "im_z0 [1/s]",
              "re_z1 [1/(s sqrtK)]",
              "im_z1 [1/(s sqrtK)]",
              "lambda1 [1/s]",
              "lambda2_o1 [1/s]",
              "lambda2_o2 [1/s]",
              "lambda2_o3 [1/s]",
              "theta",
              "r_bound_abs",
              "sqrtT_bound_abs [sqrtK]",
              "r_bound_eta",
              "sqrtT_bound_eta [sqrtK]",
              "flags_ok_abs_r",
              "flags_ok_abs_T",
              "flags_ok_eta_r",
              "flags_ok_eta_T"};
  BathSpec bath = cfg.bath;
  const auto coeffs = rate_coefficients(bath, cfg.pair);  // T-independent family
  for (double T : cfg.temperatures()) {
    bath.T = T;
    const auto v = lightbath::validity_conditions(bath, cfg.pair, T, cfg.run.margin);
    t.rows.push_back({T,
                      coeffs.zeta0,
                      coeffs.zeta1,
                      coeffs.zeta21,
                      coeffs.zeta22,
                      coeffs.xi1,
                      coeffs.xi21,
                      coeffs.xi22,
                      coeffs.z0.real(),
                      coeffs.z0.imag(),
                      coeffs.z1.real(),
                      coeffs.z1.imag(),
                      lightbath::lambda_1(bath, cfg.pair),
                      lightbath::lambda_2(bath, cfg.pair, T, 1),
                      lightbath::lambda_2(bath, cfg.pair, T, 2),
                      lightbath::lambda_2(bath, cfg.pair, T, 3),
                      dimensionless_temperature(bath, cfg.run.ref_length),
                      v.r_bound_abs,
                      v.sqrtT_bound_abs,
                      v.r_bound_eta,
                      v.sqrtT_bound_eta,
                      v.ok_abs_r ? 1.0 : 0.0,
                      v.ok_abs_T ? 1.0 : 0.0,
                      v.ok_eta_r ? 1.0 : 0.0,
                      v.ok_eta_T ? 1.0 : 0.0});
  }
  return t;
}

csv::Table trace_table(const ScenarioConfig& cfg, const RateCoefficientSet& coeffs,
                       const std::vector<double>& times) {
  csv::Table t;
  t.header = {"t [s]",      "abs_rho_o0", "abs_rho_o1", "abs_rho_o2",
              "eta_o0",     "eta_o1",     "eta_o2"};
  const auto tr0 = coherence_series(coeffs, cfg.pair, cfg.bath.T, times, TruncationOrder::T0);
  const auto tr1 = coherence_series(coeffs, cfg.pair, cfg.bath.T, times, TruncationOrder::T_half);
  const auto tr2 = coherence_series(coeffs, cfg.pair, cfg.bath.T, times, TruncationOrder::T1);
  for (size_t i = 0; i < times.size(); ++i) {
    t.rows.push_back({times[i], tr0.abs_rho[i], tr1.abs_rho[i], tr2.abs_rho[i], tr0.eta[i],
                      tr1.eta[i], tr2.eta[i]});
  }
  return t;
}

csv::Table regimes_table(const ScenarioConfig& cfg, const RateCoefficientSet& coeffs,
                         double t_max) {
  csv::Table t;
  t.header = {"figure", "curve", "t [s]", "sqrtT [sqrtK]"};
  const regimes::TimeRange range{t_max, cfg.run.t_points};
  // curve codes: 0 solid, 1 dashed, 2 dotted
  const auto emit = [&t](double fig, const regimes::RegionCurves& c) {
    for (const auto& [x, y] : c.solid) t.rows.push_back({fig, 0.0, x, y});
    for (const auto& [x, y] : c.dashed) t.rows.push_back({fig, 1.0, x, y});
    for (const auto& [x, y] : c.dotted) t.rows.push_back({fig, 2.0, x, y});
  };
  if (coeffs.zeta0 > 0.0 && coeffs.zeta1 != 0.0) {
    emit(1.0, regimes::fig1_curves(coeffs, cfg.run.margin, range));
  }
  if (coeffs.xi1 != 0.0) {
    emit(2.0, regimes::fig2_curves(coeffs, cfg.run.margin, range));
  }
  return t;
}

struct OracleOutput {
  csv::Table trace;
  csv::Table comparison;
  double max_abs_rho_residual = 0.0;
  double max_eta_residual = 0.0;
};

OracleOutput run_oracle(const ScenarioConfig& cfg, const RateCoefficientSet& coeffs,
                        const std::vector<double>& times) {
  const double l = cfg.run.ref_length;
  const BathSpec& bath = cfg.bath;
  const double r = bath.mass_ratio();

  auto grid = std::make_shared<const oracle::RadialGrid>(
      oracle::RadialGrid::make(r, cfg.oracle.grid));
  auto kernels = std::make_shared<const oracle::GainKernels>(
      oracle::build_gain_kernels(*grid, r, cfg.oracle.quad, cfg.oracle.threads));

  // eta needs the off-diagonal pair plus both diagonal self-pairs.
  ChannelPair diag_nu = cfg.pair;
  diag_nu.nu_prime = cfg.pair.nu;
  diag_nu.rho0 = cfg.pair.rho0_diag_nu;
  ChannelPair diag_nup = cfg.pair;
  diag_nup.nu = cfg.pair.nu_prime;
  diag_nup.rho0 = cfg.pair.rho0_diag_nup;

  const oracle::MasterOperator op(oracle::scale_problem(bath, cfg.pair, l), grid, kernels);
  const oracle::MasterOperator op_nu(oracle::scale_problem(bath, diag_nu, l), grid, kernels);
  const oracle::MasterOperator op_nup(oracle::scale_problem(bath, diag_nup, l), grid, kernels);

  std::vector<double> taus;
  taus.reserve(times.size());
  for (double t : times) taus.push_back(oracle::tau_from_time(bath, t, l));

  const auto s_off = op.evolve_sampled(op.init_gamma(), taus, cfg.oracle.dt);
  const auto s_nu = op_nu.evolve_sampled(op_nu.init_gamma(), taus, cfg.oracle.dt);
  const auto s_nup = op_nup.evolve_sampled(op_nup.init_gamma(), taus, cfg.oracle.dt);

  OracleOutput out;
  out.trace.header = {"tau", "t [s]", "re_rho", "im_rho", "abs_rho", "eta"};
  out.comparison.header = {"t [s]",          "abs_rho_series", "abs_rho_oracle",
                           "abs_rho_resid",  "eta_series",     "eta_oracle",
                           "eta_resid",      "within_tol"};
  const auto series = coherence_series(coeffs, cfg.pair, bath.T, times, TruncationOrder::T1);
  for (size_t i = 0; i < times.size(); ++i) {
    const Complex rho = s_off[i].rho;
    const double pop = std::sqrt(std::abs(s_nu[i].rho.real() * s_nup[i].rho.real()));
    const double eta = pop > 0.0 ? std::abs(rho) / pop : 0.0;
    out.trace.rows.push_back({taus[i], times[i], rho.real(), rho.imag(), std::abs(rho), eta});
    const double d_abs = std::abs(series.abs_rho[i] - std::abs(rho));
    const double d_eta = std::abs(series.eta[i] - eta);
    out.max_abs_rho_residual = std::max(out.max_abs_rho_residual, d_abs);
    out.max_eta_residual = std::max(out.max_eta_residual, d_eta);
    const bool ok = d_abs <= cfg.oracle.compare_tol && d_eta <= cfg.oracle.compare_tol;
    out.comparison.rows.push_back({times[i], series.abs_rho[i], std::abs(rho), d_abs,
                                   series.eta[i], eta, d_eta, ok ? 1.0 : 0.0});
  }
  return out;
}

}  // namespace

ScenarioResult run_scenario(const ScenarioConfig& cfg, const std::filesystem::path& out_dir,
                            const ArtifactSelection& select) {
  std::filesystem::create_directories(out_dir);
  ScenarioResult result;
  result.coeffs = rate_coefficients(cfg.bath, cfg.pair);

  const auto times = cfg.time_grid(result.coeffs.zeta0);

  if (select.rates) {
    const auto path = out_dir / "rates.csv";
    csv::write_file(path, rates_table(cfg));
    result.written.push_back(path);
  }
  if (select.trace && !cfg.t_sweep) {
    const auto path = out_dir / "coherence_trace.csv";
    csv::write_file(path, trace_table(cfg, result.coeffs, times));
    result.written.push_back(path);
  }
  if (select.regimes) {
    const auto path = out_dir / "regimes.csv";
    csv::write_file(path, regimes_table(cfg, result.coeffs, times.back()));
    result.written.push_back(path);
  }
  if ((select.oracle || cfg.run.oracle) && !cfg.t_sweep) {
    auto out = run_oracle(cfg, result.coeffs, times);
    const auto tpath = out_dir / "oracle_trace.csv";
    csv::write_file(tpath, out.trace);
    result.written.push_back(tpath);
    const auto cpath = out_dir / "comparison.csv";
    csv::write_file(cpath, out.comparison);
    result.written.push_back(cpath);
    result.max_abs_rho_residual = out.max_abs_rho_residual;
    result.max_eta_residual = out.max_eta_residual;
  }
  return result;
}

InversionReport invert_from_csv(const ScenarioConfig& cfg,
                                const std::filesystem::path& measurements_csv,
                                const std::filesystem::path& out_dir,
                                std::optional<int> prior_sign) {
  const csv::Table meas = csv::read_file(measurements_csv);
  if (meas.rows.empty()) {
    throw ValidationError(measurements_csv.string() + ": empty measurement set");
  }
  if (meas.header.size() < 2) {
    throw ValidationError(measurements_csv.string() +
                          ": need columns T, lambda2 (optional sigma)");
  }
  std::vector<std::pair<double, double>> points;
  std::vector<double> sigma;
  const bool has_sigma = meas.header.size() >= 3;
  for (const auto& row : meas.rows) {
    points.emplace_back(row[0], row[1]);
    if (has_sigma) sigma.push_back(row[2]);
  }

  InversionReport report;
  report.result = lightbath::invert_alpha(cfg.bath, cfg.pair.nu, cfg.pair.nu_prime.beta(), points,
                                          1, prior_sign, sigma);
  BathSpec bath = cfg.bath;
  for (const auto& [T, lam] : points) {
    (void)lam;
    bath.T = T;
    const auto v = lightbath::validity_conditions(bath, cfg.pair, T, cfg.run.margin);
    report.temperatures.push_back(T);
    report.within_validity.push_back(v.ok_eta_T && v.ok_eta_r && !v.indeterminate_eta);
  }

  std::filesystem::create_directories(out_dir);
  csv::Table t;
  t.header = {"alpha_prime_low [m]", "alpha_prime_high [m]", "preferred", "fit_residual [1/s]",
              "abs_da_sq [m^2]"};
  t.rows.push_back({report.result.alpha_prime_candidates[0],
                    report.result.alpha_prime_candidates[1],
                    static_cast<double>(report.result.preferred), report.result.fit_residual,
                    report.result.abs_da_sq});
  report.report_path = out_dir / "inversion_report.csv";
  csv::write_file(report.report_path, t);
  return report;
}

}  // namespace decokin
