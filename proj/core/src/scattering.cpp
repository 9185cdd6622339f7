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

#include "decokin/scattering.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "decokin/constants.hpp"
#include "decokin/errors.hpp"

namespace decokin {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kInf = std::numeric_limits<double>::infinity();

bool finite(Complex z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

// Smallest positive root of w0 + w1 x + w2 x^2, or +inf.
double smallest_positive_root(double w0, double w1, double w2) {
  if (w2 == 0.0) {
    if (w1 == 0.0) return kInf;
    const double x = -w0 / w1;
    return x > 0.0 ? x : kInf;
  }
  const double disc = w1 * w1 - 4.0 * w0 * w2;
  if (disc < 0.0) return kInf;
  const double sq = std::sqrt(disc);
  // Numerically stable pair of roots.
  const double q = -0.5 * (w1 + std::copysign(sq, w1));
  double r1 = q / w2;
  double r2 = (q != 0.0) ? w0 / q : kInf;
  if (r1 > r2) std::swap(r1, r2);
  if (r1 > 0.0) return r1;
  if (r2 > 0.0) return r2;
  return kInf;
}
}  // namespace

void Channel::validate() const {
  if (!finite(a) || !finite(b_red) || !finite(c_red) || !std::isfinite(energy)) {
    throw ValidationError("channel '" + label + "': coefficients must be finite");
  }
  if (beta() < 0.0) {
    throw ValidationError("channel '" + label +
                          "': beta = -Im(a) must be >= 0 (a cross section cannot be negative)");
  }
}

void BathSpec::validate() const {
  if (!(m > 0.0) || !(M > 0.0)) throw ValidationError("bath: masses must be positive");
  if (!(n_gas > 0.0)) throw ValidationError("bath: number density must be positive");
  if (!(T > 0.0)) throw ValidationError("bath: temperature must be positive");
  if (!std::isfinite(m) || !std::isfinite(M) || !std::isfinite(n_gas) || !std::isfinite(T)) {
    throw ValidationError("bath: parameters must be finite");
  }
}

double ChannelPair::eta0() const {
  const double denom = rho0_diag_nu * rho0_diag_nup;
  if (denom <= 0.0) return 0.0;
  return std::abs(rho0) / std::sqrt(denom);
}

void ChannelPair::validate() const {
  nu.validate();
  nu_prime.validate();
  if (rho0_diag_nu < 0.0 || rho0_diag_nu > 1.0 || rho0_diag_nup < 0.0 || rho0_diag_nup > 1.0) {
    throw ValidationError("pair: diagonal populations must lie in [0, 1]");
  }
  const double denom = rho0_diag_nu * rho0_diag_nup;
  const double coh = std::norm(rho0);
  if (coh > 0.0 && (denom <= 0.0 || coh / denom > 1.0 + 1e-12)) {
    throw ValidationError("pair: |rho0|^2 must not exceed the product of the populations");
  }
}

Complex amplitude(const Channel& ch, double p) {
  if (p < 0.0) throw std::domain_error("amplitude: momentum must be >= 0");
  const double ph = p / constants::hbar;
  return -ch.a + ch.b_red * ph + ch.c_red * (ph * ph);
}

double positivity_limit(const Channel& ch) {
  // total ~ beta + Im(b_red)/hbar p + Im(c_red)/hbar^2 p^2
  const double pt = smallest_positive_root(ch.beta(), ch.b_red.imag() / constants::hbar,
                                           ch.c_red.imag() / (constants::hbar * constants::hbar));
  // elastic ~ |a|^2 - 2 Re(a conj(b_red))/hbar p
  const double pe =
      smallest_positive_root(std::norm(ch.a), -2.0 * (ch.a * std::conj(ch.b_red)).real() / constants::hbar, 0.0);
  return std::min(pt, pe);
}

CrossSections cross_sections(const Channel& ch, double p) {
  if (p <= 0.0) throw std::domain_error("cross_sections: momentum must be > 0");
  const double hb = constants::hbar;
  CrossSections cs;
  cs.total = 4.0 * kPi * hb / p *
             (ch.beta() + ch.b_red.imag() * p / hb + ch.c_red.imag() * p * p / (hb * hb));
  cs.elastic = 4.0 * kPi * (std::norm(ch.a) - 2.0 * (ch.a * std::conj(ch.b_red)).real() * p / hb);
  cs.inelastic = cs.total - cs.elastic;
  cs.p_positive_max = positivity_limit(ch);
  cs.valid = p <= cs.p_positive_max;
  return cs;
}

AmpDiffSqCoeffs amp_diff_sq_coeffs(const Channel& ch1, const Channel& ch2) {
  const double hb = constants::hbar;
  const Complex da = ch1.a - ch2.a;
  const Complex db = (ch1.b_red - ch2.b_red) / hb;
  const Complex dc = (ch1.c_red - ch2.c_red) / (hb * hb);
  AmpDiffSqCoeffs d;
  d.d0 = std::norm(da);
  d.d1 = -2.0 * (da * std::conj(db)).real();
  d.d2 = std::norm(db) - 2.0 * (da * std::conj(dc)).real();
  return d;
}

}  // namespace decokin
