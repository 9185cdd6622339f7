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

#include <array>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "decokin/scattering.hpp"

// Light-buffer-gas (small mass ratio) limit. In scaled time tau the still-
// trapped coherence obeys
//
//   d rho_el / d tau = (i d_eps + w0) rho_el + r w1 rho_el + O(r^2),
//
// so evolution is exponential up to first order in r regardless of
// temperature. The w_k are thermal averages of the s-wave amplitudes,
//
//   w_k = Integral d3q e^{-q^2}/pi^{3/2} (4 - 2 q^2)^k
//         { 2 pi i [f_nu(p_q) - f*_nu'(p_q)]/l
//           + q theta^{1/2} Integral d2n f_nu f*_nu' / l^2 },
//
// and the eta decay rates come from the symmetric combination
// omega_k = (w^{nu nu'} + w^{nu' nu} - w^{nu nu} - w^{nu' nu'})/2, whose
// integrand is -|f_nu - f_nu'|^2 times a positive weight, hence omega_k <= 0.
namespace decokin::lightbath {

enum class WMode { expansion, quadrature };

// w_k for the ordered pair (nu, nu') of `pair`, k in {0, 1}. Expansion mode
// returns the closed low-theta forms through order theta; quadrature mode
// integrates the thermal average with a 64-node half-range Gauss-Hermite rule
// (the angular s-wave integral is the analytic 4 pi). Dimensionless, per
// scaled time; only the lambda rates are reference-length independent.
Complex w_integral(int k, const BathSpec& bath, const ChannelPair& pair, double theta,
                   WMode mode, double ref_length = 1e-9);

// Same for the eta combination omega_k; real and <= 0 for every channel pair.
double omega_integral(int k, const BathSpec& bath, const ChannelPair& pair, double theta,
                      WMode mode, double ref_length = 1e-9);

// Exponential decay constant of |rho_el| at zeroth order in r and T:
// lambda_1 = n_gas 2 pi hbar (beta_nu + beta_nu') / m.
double lambda_1(const BathSpec& bath, const ChannelPair& pair);

// Exponential decay constant of eta at zeroth order in r:
//   lambda_2 = (n/m) [ (2 m k_B T)^{1/2} 4 pi^{1/2} |da|^2
//                    - (2 m k_B T)    6 pi    Re(da db*)
//                    + (2 m k_B T)^{3/2} 8 pi^{1/2} (|db|^2 - 2 Re(da dc*)) ]
// truncated at the requested order in {1, 2, 3}.
double lambda_2(const BathSpec& bath, const ChannelPair& pair, double T, int order = 3);

struct ValidityConditions {
  // Right-hand-side bounds of the four smallness conditions; the flags apply
  // the configurable margin ("much less than" as ratio < margin).
  double r_bound_abs = 0.0;       // bound on r for the |rho_el| zeroth-order rate
  double sqrtT_bound_abs = 0.0;   // bound on T^{1/2} [K^{1/2}] for lambda_1
  double r_bound_eta = 0.0;       // bound on r for the eta zeroth-order rate
  double sqrtT_bound_eta = 0.0;   // bound on T^{1/2} [K^{1/2}] for lambda_2 truncation
  bool ok_abs_r = false, ok_abs_T = false;
  bool ok_eta_r = false, ok_eta_T = false;
  // Degenerate denominators (e.g. beta_nu = beta_nu' = 0, or da = 0) make the
  // corresponding bound meaningless rather than wrong.
  bool indeterminate_abs = false;
  bool indeterminate_eta = false;
  double margin = 0.1;
};

ValidityConditions validity_conditions(const BathSpec& bath, const ChannelPair& pair, double T,
                                       double margin = 0.1);

struct InversionResult {
  // alpha_nu' candidates alpha_known -/+ sqrt(|da|^2 - (dbeta)^2). The
  // leading-order rate fixes only |da|^2, so both roots are physical;
  // `preferred` is set when a prior sign of (alpha_nu' - alpha_known) is
  // supplied, otherwise -1.
  std::array<double, 2> alpha_prime_candidates{};
  int preferred = -1;
  double fit_residual = 0.0;  // weighted RMS of lambda2 - kappa T^{1/2} [1/s]
  double abs_da_sq = 0.0;     // fitted |a_nu - a_nu'|^2 [m^2]
};

// Determines alpha_nu' from measured eta decay constants lambda2(T) by a
// weighted least-squares fit of lambda2 = kappa T^{1/2} (leading order; only
// order = 1 is supported). beta_prime is the known imaginary part of the
// unknown channel's scattering length. Throws ValidationError on an empty
// measurement set and NumericalError when |da|^2 < (dbeta)^2 (inconsistent
// data admits no real solution).
InversionResult invert_alpha(const BathSpec& bath, const Channel& known, double beta_prime,
                             std::span<const std::pair<double, double>> lambda2_measured,
                             int order = 1, std::optional<int> prior_sign = std::nullopt,
                             std::span<const double> sigma = {});

}  // namespace decokin::lightbath
