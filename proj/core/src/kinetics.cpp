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

#include "decokin/kinetics.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "decokin/constants.hpp"

namespace decokin {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kMassFactorSeriesThreshold = 1e-4;

struct ZFamily {
  Complex z0, z1, z21, z22;
};

// z coefficients for the ordered index pair (A, B). Raw (non-reduced) b and c
// enter as b = b_red/hbar, c = c_red/hbar^2; the formulas below keep the
// reduced combinations so hbar appears only where physically required.
ZFamily z_family(const BathSpec& bath, const Channel& A, const Channel& B) {
  using constants::hbar;
  using constants::k_boltzmann;
  const double n = bath.n_gas;
  const double mstar = bath.reduced_mass();
  const double r = bath.mass_ratio();
  const Complex i(0.0, 1.0);

  // u = i hbar (b_A - b_B*) + 2 a_A a_B*  [m^2]; the combination every
  // temperature-dependent coefficient is built from.
  const Complex u = i * (A.b_red - std::conj(B.b_red)) + 2.0 * A.a * std::conj(B.a);

  ZFamily z;
  z.z0 = i * (B.energy - A.energy) / hbar -
         2.0 * kPi * i * (A.a - std::conj(B.a)) * hbar * n / mstar;
  z.z1 = std::pow(2.0, 2.5) * std::sqrt(kPi) * std::sqrt(k_boltzmann) * n / std::sqrt(mstar) * u;
  z.z21 = 6.0 * kPi * n * k_boltzmann *
          (i * (A.c_red - std::conj(B.c_red)) / hbar -
           2.0 * (A.a * std::conj(B.b_red) + A.b_red * std::conj(B.a)) / hbar);
  z.z22 = 8.0 * kPi * k_boltzmann * n * n / bath.m * mass_factor(r) * u * u;
  return z;
}
}  // namespace

double mass_factor(double r) {
  if (!(r > 0.0)) throw std::domain_error("mass_factor: r must be > 0");
  if (r < kMassFactorSeriesThreshold) {
    return 4.0 + r * (4.0 + r * (2.0 / 3.0 - r * (2.0 / 3.0)));
  }
  return 3.0 * std::sqrt(2.0 * r + 1.0) +
         (1.0 + r * (2.0 + 3.0 * r)) / r * std::asin(r / (r + 1.0));
}

double appendix_a2(double s) {
  if (s < 0.0 || s >= 1.0) throw std::domain_error("appendix_a2: s must lie in [0, 1)");
  if (s == 0.0) return 0.0;
  return std::asin(s) / std::sqrt(1.0 - s * s);
}

double appendix_a1(double s) {
  if (!(s > 0.0) || s >= 1.0) throw std::domain_error("appendix_a1: s must lie in (0, 1)");
  const double om = 1.0 - s * s;
  const double d2 = (1.0 + 2.0 * s * s) * std::pow(om, -2.5) * std::asin(s) + 3.0 * s / (om * om);
  return kPi * kPi / s * d2;
}

double appendix_a(double r) {
  if (!(r > 0.0)) throw std::domain_error("appendix_a: r must be > 0");
  const double s = r / (r + 1.0);
  return std::pow(r, 1.5) * std::pow(kPi, 1.5) * std::pow(2.0 * r + 1.0, 2.5) /
         std::pow(r + 1.0, 4.0) * appendix_a1(s);
}

RateCoefficientSet rate_coefficients(const BathSpec& bath, const ChannelPair& pair) {
  bath.validate();
  pair.validate();

  const ZFamily vp = z_family(bath, pair.nu, pair.nu_prime);

  RateCoefficientSet c;
  c.z0 = vp.z0;
  c.z1 = vp.z1;
  c.z21 = vp.z21;
  c.z22 = vp.z22;
  c.zeta0 = -vp.z0.real();
  c.zeta1 = vp.z1.real();
  c.zeta21 = vp.z21.real();
  c.zeta22 = vp.z22.real() + vp.z1.imag() * vp.z1.imag();

  // xi family: the symmetric combination (z^{nu nu'} + z^{nu' nu} - z^{nu nu}
  // - z^{nu' nu'})/2 over the four index pairs, evaluated in its reduced form
  // so identical channels give exact zeros. xi22 additionally carries the
  // quadratic z1 cross terms from expanding the square roots in eta.
  using constants::hbar;
  using constants::k_boltzmann;
  const double n = bath.n_gas;
  const double mstar = bath.reduced_mass();
  const Channel& A = pair.nu;
  const Channel& B = pair.nu_prime;
  const Complex da = A.a - B.a;
  const Complex dbr = A.b_red - B.b_red;
  c.xi1 = -std::pow(2.0, 2.5) * std::sqrt(kPi) * n * std::sqrt(k_boltzmann / mstar) *
          std::norm(da);
  c.xi21 = 12.0 * kPi * n * k_boltzmann * (da * std::conj(dbr)).real() / hbar;
  const double curly = std::norm(dbr) -
                       4.0 * ((A.b_red * A.a - B.b_red * B.a) * std::conj(da)).imag() +
                       2.0 * std::norm(da) * std::norm(A.a + B.a);
  c.xi22 = -8.0 * kPi * k_boltzmann * n * n / bath.m *
               (mass_factor(bath.mass_ratio()) - 4.0 * (1.0 + bath.mass_ratio())) * curly +
           32.0 * kPi * k_boltzmann * n * n / mstar * std::norm(da) * std::norm(da);
  return c;
}

namespace {
// Bracket factors of the two series at a given truncation order.
double abs_rho_bracket(const RateCoefficientSet& c, double T, double t, TruncationOrder order) {
  double v = 1.0;
  if (order != TruncationOrder::T0) v += c.zeta1 * std::sqrt(T) * t;
  if (order == TruncationOrder::T1) v += T * (c.zeta21 * t + c.zeta22 * t * t / 2.0);
  return v;
}

double eta_bracket(const RateCoefficientSet& c, double T, double t, TruncationOrder order) {
  double v = 1.0;
  if (order != TruncationOrder::T0) v += std::sqrt(T) * t * c.xi1;
  if (order == TruncationOrder::T1) v += T * (c.xi21 * t + c.xi22 * t * t / 2.0);
  return v;
}
}  // namespace

CoherenceTrace coherence_series(const RateCoefficientSet& coeffs, const ChannelPair& pair,
                                double T, std::span<const double> times, TruncationOrder order) {
  if (T < 0.0) throw std::domain_error("coherence_series: temperature must be >= 0");
  CoherenceTrace trace;
  trace.order = order;
  trace.times.assign(times.begin(), times.end());
  trace.abs_rho.reserve(times.size());
  trace.eta.reserve(times.size());
  const double r0 = std::abs(pair.rho0);
  const double e0 = pair.eta0();
  for (double t : times) {
    if (t < 0.0) throw std::domain_error("coherence_series: times must be >= 0");
    trace.abs_rho.push_back(r0 * std::exp(-coeffs.zeta0 * t) * abs_rho_bracket(coeffs, T, t, order));
    trace.eta.push_back(e0 * eta_bracket(coeffs, T, t, order));
  }
  return trace;
}

DecoherenceRates decoherence_rates(const RateCoefficientSet& c, const ChannelPair& pair, double T,
                                   double t, TruncationOrder order) {
  if (T < 0.0) throw std::domain_error("decoherence_rates: temperature must be >= 0");
  if (t < 0.0) throw std::domain_error("decoherence_rates: time must be >= 0");
  const double sT = std::sqrt(T);
  DecoherenceRates out;

  double brace = -c.zeta0;
  if (order != TruncationOrder::T0) brace += c.zeta1 * (1.0 - c.zeta0 * t) * sT;
  if (order == TruncationOrder::T1) {
    brace += T * (c.zeta21 * (1.0 - c.zeta0 * t) + c.zeta22 * (t - c.zeta0 * t * t / 2.0));
  }
  out.d_abs_rho_dt = std::abs(pair.rho0) * std::exp(-c.zeta0 * t) * brace;

  double ebrace = 0.0;
  if (order != TruncationOrder::T0) ebrace += sT * c.xi1;
  if (order == TruncationOrder::T1) ebrace += T * (c.xi21 + t * c.xi22);
  out.d_eta_dt = pair.eta0() * ebrace;
  return out;
}

Complex rho_el_complex(const RateCoefficientSet& c, const ChannelPair& pair, double T, double t) {
  if (T < 0.0) throw std::domain_error("rho_el_complex: temperature must be >= 0");
  if (t < 0.0) throw std::domain_error("rho_el_complex: time must be >= 0");
  const double sT = std::sqrt(T);
  const Complex bracket =
      1.0 + sT * c.z1 * t + T * (c.z21 * t + c.z22 * t * t / 2.0);
  return std::exp(c.z0 * t) * pair.rho0 * bracket;
}

double dimensionless_temperature(const BathSpec& bath, double ref_length) {
  return 2.0 * bath.m * constants::k_boltzmann * bath.T * ref_length * ref_length /
         (constants::hbar * constants::hbar);
}

}  // namespace decokin
