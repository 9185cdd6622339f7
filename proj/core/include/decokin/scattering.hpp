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

#include <complex>
#include <string>

namespace decokin {

using Complex = std::complex<double>;

// One internal state of the tracer particle. Scattering off the buffer gas in
// this state is parametrized by the truncated low-momentum s-wave amplitude
//
//   f(p) = -a + (b_red/hbar) p + (c_red/hbar^2) p^2,
//
// where a = alpha - i*beta is the complex scattering length [m]. The stored
// coefficients are the reduced combinations b_red = hbar*b [m^2] and
// c_red = hbar^2*c [m^3]; these are the combinations that appear in every
// final rate formula, so no hbar bookkeeping leaks out of this module.
// Truncation is fixed at quadratic order; higher coefficients are not
// accepted.
struct Channel {
  std::string label;
  double energy = 0.0;  // internal state energy [J]
  Complex a{};          // complex scattering length [m], beta = -Im(a) >= 0
  Complex b_red{};      // hbar * b [m^2]
  Complex c_red{};      // hbar^2 * c [m^3]

  double alpha() const { return a.real(); }
  double beta() const { return -a.imag(); }

  // Throws ValidationError unless beta >= 0 and all coefficients are finite.
  void validate() const;
};

// Buffer gas plus tracer masses and bath thermodynamic state.
struct BathSpec {
  double m = 0.0;      // buffer gas particle mass [kg]
  double M = 0.0;      // tracer particle mass [kg]
  double n_gas = 0.0;  // buffer gas number density [m^-3]
  double T = 0.0;      // bath temperature [K]

  double mass_ratio() const { return m / M; }                // r = m/M
  double reduced_mass() const { return m * M / (m + M); }    // m*

  void validate() const;
};

// Ordered pair of internal states with the initial reduced-density-matrix
// data: the off-diagonal element rho_{nu nu'}(0) and the two populations.
struct ChannelPair {
  Channel nu;
  Channel nu_prime;
  Complex rho0{};                // rho_{nu nu'}(0), dimensionless
  double rho0_diag_nu = 1.0;     // rho_{nu nu}(0)
  double rho0_diag_nup = 1.0;    // rho_{nu' nu'}(0)

  // Initial relative coherence |rho0| / sqrt(populations); in [0, 1].
  double eta0() const;

  void validate() const;
};

// Truncated s-wave amplitude f(p) [m]. Throws std::domain_error for p < 0.
Complex amplitude(const Channel& ch, double p);

struct CrossSections {
  double total = 0.0;      // [m^2]
  double elastic = 0.0;    // [m^2]
  double inelastic = 0.0;  // [m^2], equals total - elastic by construction
  // Largest momentum below which both truncated cross sections stay
  // nonnegative; +inf when they never go negative.
  double p_positive_max = 0.0;
  // True when the requested p lies inside [0, p_positive_max]. Values are
  // never clamped: a negative truncated cross section is returned as-is with
  // valid = false, since it signals breakdown of the truncation.
  bool valid = false;
};

// Leading-order cross sections at relative momentum p > 0:
//   total     = (4 pi hbar / p) (beta + Im(b_red) p/hbar + Im(c_red) p^2/hbar^2)
//   elastic   = 4 pi (|a|^2 - 2 Re(a conj(b_red)) p / hbar)
//   inelastic = total - elastic at matching truncation order.
// Throws std::domain_error for p <= 0.
CrossSections cross_sections(const Channel& ch, double p);

// Momentum beyond which a truncated cross section first goes negative
// (+inf if none does).
double positivity_limit(const Channel& ch);

// Coefficients of |f_1(p) - f_2(p)|^2 = d0 + d1 p + d2 p^2 with the same
// quadratic truncation as the amplitudes themselves.
struct AmpDiffSqCoeffs {
  double d0 = 0.0;  // [m^2]
  double d1 = 0.0;  // [m^2 / (kg m/s)]
  double d2 = 0.0;  // [m^2 / (kg m/s)^2]
};

AmpDiffSqCoeffs amp_diff_sq_coeffs(const Channel& ch1, const Channel& ch2);

}  // namespace decokin
