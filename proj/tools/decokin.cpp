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

#include <CLI11.hpp>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <numbers>
#include <optional>
#include <string>

#include "decokin/config.hpp"
#include "decokin/errors.hpp"
#include "decokin/kinetics.hpp"
#include "decokin/scenario.hpp"

namespace {

constexpr int kExitValidation = 2;
constexpr int kExitNumerical = 3;

struct GlobalOpts {
  std::string config_path;
  std::string out_dir = "out";
  std::optional<double> margin;
  std::optional<int> order;
  bool strict = false;
  std::optional<int> threads;
};

decokin::ScenarioConfig load(const GlobalOpts& g) {
  if (g.config_path.empty()) {
    throw decokin::ValidationError("missing --config PATH");
  }
  std::vector<std::string> warnings;
  auto cfg = decokin::load_config(g.config_path, g.strict, &warnings);
  for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";
  if (g.margin) cfg.run.margin = *g.margin;
  if (g.order) {
    if (*g.order < 0 || *g.order > 2) {
      throw decokin::ValidationError("--order must be 0, 1 or 2 for series truncation");
    }
    cfg.run.order = static_cast<decokin::TruncationOrder>(*g.order);
  }
  if (g.threads) cfg.oracle.threads = *g.threads;
  return cfg;
}

void report(const decokin::ScenarioResult& result) {
  for (const auto& p : result.written) std::cout << "wrote " << p.string() << "\n";
  if (result.max_abs_rho_residual) {
    std::cout << "max series-vs-oracle residual: |rho_el| " << *result.max_abs_rho_residual
              << ", eta " << *result.max_eta_residual << "\n";
  }
}

void appendix_check() {
  // Two independent in-library routes to the same bracket: the closed form
  // and the chain through the nine-fold collision integral.
  std::printf("%8s  %16s  %16s  %12s\n", "r", "mass_factor", "via A(r)", "rel diff");
  const double rs[] = {1e-6, 1e-4, 0.01, 0.05, 0.1, 0.25, 0.5, 1.0, 2.0};
  for (double r : rs) {
    const double direct = decokin::mass_factor(r);
    const double via_a =
        decokin::appendix_a(r) / (std::pow(r, 1.5) * std::pow(std::numbers::pi, 3.5));
    std::printf("%8g  %16.12f  %16.12f  %12.3e\n", r, direct, via_a,
                (via_a - direct) / direct);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"decokin: collisional decoherence rates, coherence traces and the "
               "master-equation oracle for a trapped tracer in an ultracold buffer gas"};
  app.require_subcommand(1);

  GlobalOpts g;
  app.add_option("--config", g.config_path, "scenario config file");
  app.add_option("--out", g.out_dir, "output directory (default: out)");
  double margin_val = 0.0;
  auto* margin_opt = app.add_option("--margin", margin_val, "validity margin factor");
  int order_val = 0;
  auto* order_opt = app.add_option("--order", order_val, "series truncation order {0,1,2}");
  app.add_flag("--strict", g.strict, "treat unknown config keys as errors");
  int threads_val = 0;
  auto* threads_opt = app.add_option("--threads", threads_val, "oracle kernel build threads");

  auto* rates = app.add_subcommand("rates", "emit the rate-coefficient table (rates.csv)");
  auto* coherence =
      app.add_subcommand("coherence", "emit series coherence traces (coherence_trace.csv)");
  auto* regimes = app.add_subcommand("regimes", "emit validity-region curves (regimes.csv)");
  auto* oracle = app.add_subcommand(
      "oracle", "run the master-equation oracle and compare against the series");
  auto* invert =
      app.add_subcommand("invert", "determine alpha_nu' from measured eta decay rates");
  std::string measurements;
  invert->add_option("measurements", measurements, "CSV with columns T [K], lambda2 [1/s], "
                                                   "optional sigma [1/s]")
      ->required();
  int prior_sign = 0;
  auto* prior_opt = invert->add_option(
      "--prior-sign", prior_sign, "expected sign of alpha_nu' - alpha_nu; ranks the two roots");
  auto* appendix = app.add_subcommand("appendix-check",
                                      "print the mass-factor verification table");

  CLI11_PARSE(app, argc, argv);
  if (*margin_opt) g.margin = margin_val;
  if (*order_opt) g.order = order_val;
  if (*threads_opt) g.threads = threads_val;

  try {
    if (*appendix) {
      appendix_check();
      return 0;
    }
    const auto cfg = load(g);
    decokin::ArtifactSelection select{false, false, false, false};
    if (*rates) select.rates = true;
    if (*coherence) {
      select.trace = true;
      select.rates = true;
    }
    if (*regimes) select.regimes = true;
    if (*oracle) {
      select.oracle = true;
      select.trace = true;
      select.rates = true;
    }
    if (*invert) {
      const auto report = decokin::invert_from_csv(
          cfg, measurements, g.out_dir,
          *prior_opt ? std::optional<int>(prior_sign) : std::nullopt);
      std::cout << "alpha_nu' candidates [m]: " << report.result.alpha_prime_candidates[0]
                << ", " << report.result.alpha_prime_candidates[1] << "\n";
      if (report.result.preferred >= 0) {
        std::cout << "preferred root (prior sign): "
                  << report.result.alpha_prime_candidates[report.result.preferred] << "\n";
      }
      std::cout << "fit residual [1/s]: " << report.result.fit_residual << "\n";
      for (size_t i = 0; i < report.temperatures.size(); ++i) {
        if (!report.within_validity[i]) {
          std::cerr << "warning: T = " << report.temperatures[i]
                    << " K lies outside the leading-order validity region\n";
        }
      }
      std::cout << "wrote " << report.report_path.string() << "\n";
      return 0;
    }
    report(decokin::run_scenario(cfg, g.out_dir, select));
    return 0;
  } catch (const decokin::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const decokin::NumericalError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumerical;
  }
}
