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

#include <span>
#include <vector>

#include "decokin/scattering.hpp"

namespace decokin {

// Coefficients of the low-temperature expansion of the still-trapped
// coherence for one ordered channel pair (nu, nu'):
//
//   rho_el(t)  = e^{z0 t} rho0 [1 + T^{1/2} z1 t + T (z21 t + z22 t^2/2)]
//   |rho_el|(t)= |rho0| e^{-zeta0 t} [1 + zeta1 T^{1/2} t + T (zeta21 t + zeta22 t^2/2)]
//   eta(t)     = eta0 [1 + T^{1/2} t xi1 + T (xi21 t + xi22 t^2/2)]
//
// z0 carries the level-splitting phase i(eps_nu' - eps_nu)/hbar, which cancels
// in both real measures. The xi family comes from the symmetric combination
// (z^{nu nu'} + z^{nu' nu} - z^{nu nu} - z^{nu' nu'})/2 over the four index
// pairs (plus the quadratic z1 cross terms entering xi22).
struct RateCoefficientSet {
  Complex z0{};   // [1/s]
  Complex z1{};   // [1/(s K^{1/2})]
  Complex z21{};  // [1/(s K)]
  Complex z22{};  // [1/(s^2 K)]
  double zeta0 = 0.0, zeta1 = 0.0, zeta21 = 0.0, zeta22 = 0.0;
  double xi1 = 0.0, xi21 = 0.0, xi22 = 0.0;
};

RateCoefficientSet rate_coefficients(const BathSpec& bath, const ChannelPair& pair);

// The bracket 3 (2r+1)^{1/2} + ((1 + 2r + 3r^2)/r) asin(r/(r+1)) from the
// iterated collision integral. Removable 0/0 at r = 0: below r = 1e-4 a
// 4-term Taylor series 4 + 4r + (2/3) r^2 - (2/3) r^3 is used; both branches
// agree to better than 1e-12 relative at the switch-over. Limit value 4 at
// r -> 0+. Throws std::domain_error for r <= 0.
double mass_factor(double r);

// Closed-form chain for the nine-fold collision integral
//   A(r) = int d3Q e^{-Q^2/r} ( int d3q q e^{-(Q+q)^2} )^2 :
// A2(s) = asin(s)/sqrt(1-s^2), A1(s) = (pi^2/s) A2''(s), and
// A(r) = r^{3/2} pi^{3/2} (2r+1)^{5/2} / (r+1)^4 * A1(r/(r+1)).
// The second derivative is taken analytically:
//   A2''(s) = (1 + 2 s^2) (1-s^2)^{-5/2} asin(s) + 3 s (1-s^2)^{-2},
// which collapses A(r) to r^{3/2} pi^{7/2} mass_factor(r).
double appendix_a2(double s);
double appendix_a1(double s);
double appendix_a(double r);

enum class TruncationOrder { T0, T_half, T1 };

struct CoherenceTrace {
  std::vector<double> times;    // [s]
  std::vector<double> abs_rho;  // |rho_el_{nu nu'}|(t), dimensionless
  std::vector<double> eta;      // eta_{nu nu'}(t), 1 at t=0 for a pure state
  TruncationOrder order = TruncationOrder::T1;
};

// Evaluates both coherence measures on the given time grid at the requested
// truncation order. Throws std::domain_error on negative time or temperature.
CoherenceTrace coherence_series(const RateCoefficientSet& coeffs, const ChannelPair& pair,
                                double T, std::span<const double> times,
                                TruncationOrder order = TruncationOrder::T1);

struct DecoherenceRates {
  double d_abs_rho_dt = 0.0;  // [1/s]
  double d_eta_dt = 0.0;      // [1/s]
};

// Closed-form time derivatives of the two series.
DecoherenceRates decoherence_rates(const RateCoefficientSet& coeffs, const ChannelPair& pair,
                                   double T, double t,
                                   TruncationOrder order = TruncationOrder::T1);

// Complex rho_el(t) including the level-splitting phase. Exposed for
// diagnostics and oracle comparison; the public measures are the real ones.
Complex rho_el_complex(const RateCoefficientSet& coeffs, const ChannelPair& pair, double T,
                       double t);

// Dimensionless temperature 2 m k_B T l^2 / hbar^2 for a reference length l.
// Reporting diagnostic only; no physical result depends on l.
double dimensionless_temperature(const BathSpec& bath, double ref_length = 1e-9);

}  // namespace decokin
