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

#include "decokin/lightbath.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "decokin/constants.hpp"
#include "decokin/errors.hpp"
#include "decokin/kinetics.hpp"
#include "decokin/quadrature.hpp"

namespace decokin::lightbath {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr int kHermiteHalfNodes = 64;

const quad::Rule& hermite_half() {
  static const quad::Rule rule = quad::gauss_hermite_half(kHermiteHalfNodes);
  return rule;
}

struct Barred {
  Complex a, b, c;  // a/l, b_red/l^2, c_red/l^3
};

Barred barred(const Channel& ch, double l) {
  return {ch.a / l, ch.b_red / (l * l), ch.c_red / (l * l * l)};
}

// f(p_q)/l as a polynomial in q with p_q = (hbar sqrt(theta)/l) q.
Complex fbar(const Barred& ch, double st, double q) {
  return -ch.a + st * q * ch.b + st * st * q * q * ch.c;
}

Complex w_expansion(const Barred& A, const Barred& B, double theta) {
  const Complex i(0.0, 1.0);
  const double st = std::sqrt(theta);
  return -2.0 * kPi * i * (A.a - std::conj(B.a)) +
         st * 4.0 * std::sqrt(kPi) * (i * (A.b - std::conj(B.b)) + 2.0 * A.a * std::conj(B.a)) +
         theta * 3.0 * kPi *
             (i * (A.c - std::conj(B.c)) -
              2.0 * (A.a * std::conj(B.b) + A.b * std::conj(B.a)));
}

Complex w1_expansion(const Barred& A, const Barred& B, double theta) {
  const Complex i(0.0, 1.0);
  return -2.0 * kPi * i * (A.a - std::conj(B.a)) -
         theta * 3.0 * kPi *
             (i * (A.c - std::conj(B.c)) -
              2.0 * (A.a * std::conj(B.b) + A.b * std::conj(B.a)));
}

Complex w_quadrature(int k, const Barred& A, const Barred& B, double theta) {
  const Complex i(0.0, 1.0);
  const double st = std::sqrt(theta);
  const auto& rule = hermite_half();
  quad::KahanSum re, im;
  for (size_t j = 0; j < rule.x.size(); ++j) {
    const double q = rule.x[j];
    const double shape = q * q * std::pow(4.0 - 2.0 * q * q, k);
    const Complex fa = fbar(A, st, q);
    const Complex fbc = std::conj(fbar(B, st, q));
    const Complex integrand = 2.0 * kPi * i * (fa - fbc) + 4.0 * kPi * st * q * fa * fbc;
    const Complex v = rule.w[j] * shape * integrand;
    re.add(v.real());
    im.add(v.imag());
  }
  return 4.0 / std::sqrt(kPi) * Complex(re.value(), im.value());
}
}  // namespace

Complex w_integral(int k, const BathSpec& bath, const ChannelPair& pair, double theta, WMode mode,
                   double ref_length) {
  if (k != 0 && k != 1) throw std::domain_error("w_integral: k must be 0 or 1");
  if (theta < 0.0) throw std::domain_error("w_integral: theta must be >= 0");
  (void)bath;  // masses enter only through theta and the tau scale
  const Barred A = barred(pair.nu, ref_length);
  const Barred B = barred(pair.nu_prime, ref_length);
  if (mode == WMode::expansion) {
    return k == 0 ? w_expansion(A, B, theta) : w1_expansion(A, B, theta);
  }
  return w_quadrature(k, A, B, theta);
}

double omega_integral(int k, const BathSpec& bath, const ChannelPair& pair, double theta,
                      WMode mode, double ref_length) {
  if (k != 0 && k != 1) throw std::domain_error("omega_integral: k must be 0 or 1");
  if (theta < 0.0) throw std::domain_error("omega_integral: theta must be >= 0");
  (void)bath;
  const Barred A = barred(pair.nu, ref_length);
  const Barred B = barred(pair.nu_prime, ref_length);
  const double st = std::sqrt(theta);
  if (mode == WMode::quadrature) {
    const auto& rule = hermite_half();
    quad::KahanSum acc;
    for (size_t j = 0; j < rule.x.size(); ++j) {
      const double q = rule.x[j];
      const Complex df = fbar(A, st, q) - fbar(B, st, q);
      acc.add(rule.w[j] * q * q * q * std::pow(4.0 - 2.0 * q * q, k) * std::norm(df));
    }
    return -8.0 * std::sqrt(kPi) * st * acc.value();
  }
  // Low-theta expansion in terms of the amplitude-difference coefficients.
  const Complex da = A.a - B.a, db = A.b - B.b, dc = A.c - B.c;
  const double d0 = std::norm(da);
  const double d1 = -2.0 * (da * std::conj(db)).real();
  const double d2 = std::norm(db) - 2.0 * (da * std::conj(dc)).real();
  if (k == 0) {
    return -4.0 * std::sqrt(kPi) * st * d0 - 3.0 * kPi * theta * d1 -
           8.0 * std::sqrt(kPi) * st * theta * d2;
  }
  return 3.0 * kPi * theta * d1 + 16.0 * std::sqrt(kPi) * st * theta * d2;
}

double lambda_1(const BathSpec& bath, const ChannelPair& pair) {
  return bath.n_gas * 2.0 * kPi * constants::hbar * (pair.nu.beta() + pair.nu_prime.beta()) /
         bath.m;
}

double lambda_2(const BathSpec& bath, const ChannelPair& pair, double T, int order) {
  if (order < 1 || order > 3) throw std::domain_error("lambda_2: order must be 1, 2 or 3");
  if (T < 0.0) throw std::domain_error("lambda_2: temperature must be >= 0");
  using constants::hbar;
  const double x = 2.0 * bath.m * constants::k_boltzmann * T;  // (momentum scale)^2
  const Complex da = pair.nu.a - pair.nu_prime.a;
  const Complex dbr = pair.nu.b_red - pair.nu_prime.b_red;
  const Complex dcr = pair.nu.c_red - pair.nu_prime.c_red;
  double lam = std::sqrt(x) * 4.0 * std::sqrt(kPi) * std::norm(da);
  if (order >= 2) lam -= x * 6.0 * kPi * (da * std::conj(dbr)).real() / hbar;
  if (order >= 3) {
    lam += std::pow(x, 1.5) * 8.0 * std::sqrt(kPi) *
           (std::norm(dbr) - 2.0 * (da * std::conj(dcr)).real()) / (hbar * hbar);
  }
  return bath.n_gas / bath.m * lam;
}

ValidityConditions validity_conditions(const BathSpec& bath, const ChannelPair& pair, double T,
                                       double margin) {
  using constants::hbar;
  using constants::k_boltzmann;
  ValidityConditions v;
  v.margin = margin;
  const double r = bath.mass_ratio();
  const Channel& cn = pair.nu;
  const Channel& cp = pair.nu_prime;

  // |rho_el| conditions. X and Y carry the T^{1/2} and T coefficients of
  // Re w0 relative to its T-independent inelastic term.
  const double beta_sum = cn.beta() + cp.beta();
  const double X = cn.b_red.imag() + cp.b_red.imag() -
                   2.0 * (cn.alpha() * cp.alpha() + cn.beta() * cp.beta());
  const double Y = cn.c_red.imag() + cp.c_red.imag() +
                   2.0 * (cn.a * std::conj(cp.b_red) + cn.b_red * std::conj(cp.a)).real();
  if (beta_sum <= 0.0) {
    v.indeterminate_abs = true;
  } else {
    const double t_half = std::sqrt(k_boltzmann * T) * std::pow(2.0, 1.5) * std::sqrt(bath.m) * X /
                          (std::sqrt(kPi) * hbar * beta_sum);
    const double t_one =
        k_boltzmann * T * 6.0 * bath.m * Y / (hbar * hbar * beta_sum);
    v.r_bound_abs = std::abs(1.0 + t_half + t_one);
    v.ok_abs_r = r < margin * v.r_bound_abs;
    if (X == 0.0) {
      v.indeterminate_abs = true;
    } else {
      v.sqrtT_bound_abs = std::sqrt(kPi) * hbar * beta_sum /
                          (std::pow(2.0, 1.5) * std::sqrt(bath.m * k_boltzmann) * std::abs(X));
      v.ok_abs_T = std::sqrt(T) < margin * v.sqrtT_bound_abs;
    }
  }

  // eta conditions, built on the amplitude-difference combinations.
  const Complex da = cn.a - cp.a;
  const Complex dbr = cn.b_red - cp.b_red;
  const Complex dcr = cn.c_red - cp.c_red;
  const double re_dadb = (da * std::conj(dbr)).real() / hbar;  // Re(da db*) [m s/kg ...]
  const double d2 = (std::norm(dbr) - 2.0 * (da * std::conj(dcr)).real()) / (hbar * hbar);
  if (re_dadb == 0.0) {
    v.indeterminate_eta = true;
  } else {
    const double da2 = std::norm(da);
    const double x = std::sqrt(2.0 * bath.m * k_boltzmann * T);
    const double lead = -2.0 * da2 / (3.0 * std::sqrt(kPi) * x * re_dadb);
    const double corr = 1.0 - 8.0 * da2 * d2 / (9.0 * kPi * re_dadb * re_dadb);
    v.r_bound_eta = std::abs(lead + corr);
    v.ok_eta_r = r < margin * v.r_bound_eta;
    if (corr == 0.0) {
      v.indeterminate_eta = true;
    } else {
      const double p_bound =
          (2.0 * da2 / (3.0 * std::sqrt(kPi) * std::abs(re_dadb))) / std::abs(corr);
      v.sqrtT_bound_eta = p_bound / std::sqrt(2.0 * bath.m * k_boltzmann);
      v.ok_eta_T = std::sqrt(T) < margin * v.sqrtT_bound_eta;
    }
  }
  return v;
}

InversionResult invert_alpha(const BathSpec& bath, const Channel& known, double beta_prime,
                             std::span<const std::pair<double, double>> lambda2_measured,
                             int order, std::optional<int> prior_sign,
                             std::span<const double> sigma) {
  if (order != 1) throw std::domain_error("invert_alpha: only the leading order is invertible");
  if (lambda2_measured.empty()) throw ValidationError("invert_alpha: empty measurement set");
  if (!sigma.empty() && sigma.size() != lambda2_measured.size()) {
    throw ValidationError("invert_alpha: sigma column length does not match measurements");
  }

  // Weighted least squares for lambda2 = kappa sqrt(T).
  double swxy = 0.0, swxx = 0.0, sw = 0.0;
  for (size_t i = 0; i < lambda2_measured.size(); ++i) {
    const auto [T, lam] = lambda2_measured[i];
    if (T < 0.0) throw ValidationError("invert_alpha: negative temperature in measurements");
    const double w = sigma.empty() ? 1.0 : 1.0 / (sigma[i] * sigma[i]);
    swxy += w * lam * std::sqrt(T);
    swxx += w * T;
    sw += w;
  }
  if (swxx <= 0.0) throw ValidationError("invert_alpha: measurements carry no temperature lever");
  const double kappa = swxy / swxx;

  double ss = 0.0;
  for (size_t i = 0; i < lambda2_measured.size(); ++i) {
    const auto [T, lam] = lambda2_measured[i];
    const double w = sigma.empty() ? 1.0 : 1.0 / (sigma[i] * sigma[i]);
    const double resid = lam - kappa * std::sqrt(T);
    ss += w * resid * resid;
  }

  InversionResult out;
  out.fit_residual = std::sqrt(ss / sw);
  const double scale =
      bath.n_gas / bath.m * std::sqrt(2.0 * bath.m * constants::k_boltzmann) * 4.0 * std::sqrt(kPi);
  out.abs_da_sq = kappa / scale;

  const double dbeta = known.beta() - beta_prime;
  const double dalpha_sq = out.abs_da_sq - dbeta * dbeta;
  if (dalpha_sq < 0.0) {
    throw NumericalError(
        "invert_alpha: no real solution; fitted |da|^2 is smaller than (dbeta)^2 "
        "(inconsistent data)");
  }
  const double d = std::sqrt(dalpha_sq);
  out.alpha_prime_candidates = {known.alpha() - d, known.alpha() + d};
  if (prior_sign) {
    out.preferred = (*prior_sign >= 0) ? 1 : 0;
  }
  return out;
}

}  // namespace decokin::lightbath
