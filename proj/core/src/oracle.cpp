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

#include "decokin/oracle.hpp"

#include <gsl/gsl_sf_bessel.h>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <numbers>
#include <stdexcept>
#include <thread>

#include "decokin/constants.hpp"
#include "decokin/errors.hpp"
#include "decokin/kinetics.hpp"
#include "decokin/quadrature.hpp"

namespace decokin::oracle {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kSqrtPi = 1.7724538509055160273;
constexpr double kStabilityFraction = 0.1;   // dt * ||G||_inf bound
constexpr double kLocalErrorTarget = 1e-11;  // accumulated RK4 error target
constexpr double kNormGrowthGuard = 10.0;    // dissipative evolution guard

void run_rows(int n, int threads, const std::function<void(int)>& body) {
  if (threads <= 0) threads = static_cast<int>(std::thread::hardware_concurrency());
  threads = std::max(1, std::min(threads, n));
  if (threads == 1) {
    for (int i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (int t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1)) body(i);
    });
  }
  for (auto& th : pool) th.join();
}

// Mean |v - s| over the unit 3-D Gaussian exp(-v^2)/pi^{3/2}; series below
// s = 1e-3 to avoid the 0/0 in erf(s)/s.
double gaussian_mean_shifted_norm(double s) {
  if (s < 1e-3) {
    const double s2 = s * s;
    return 2.0 / kSqrtPi * (1.0 + s2 / 3.0 - s2 * s2 / 30.0);
  }
  return (s + 0.5 / s) * std::erf(s) + std::exp(-s * s) / kSqrtPi;
}
}  // namespace

RadialGrid RadialGrid::make(double r, const GridParams& params) {
  if (!(r > 0.0)) throw std::domain_error("RadialGrid: mass ratio must be > 0");
  if (params.nodes < 8) throw std::domain_error("RadialGrid: need at least 8 nodes");
  RadialGrid grid;
  grid.q_max_ = params.span / std::sqrt(r);
  const auto rule = quad::gauss_legendre(params.nodes);
  const int n = params.nodes;
  grid.nodes_.resize(n);
  grid.weights_.resize(n);
  grid.bary_.resize(n);
  const double half = 0.5 * grid.q_max_;
  for (int i = 0; i < n; ++i) {
    grid.nodes_[i] = half * (rule.x[i] + 1.0);
    grid.weights_[i] = half * rule.w[i];
    // Stable closed-form barycentric weights for Gauss-Legendre nodes.
    const double sign = (i % 2 == 0) ? 1.0 : -1.0;
    grid.bary_[i] = sign * std::sqrt((1.0 - rule.x[i] * rule.x[i]) * rule.w[i]);
  }
  return grid;
}

void RadialGrid::interp_row(double x, Eigen::VectorXd& out) const {
  const int n = size();
  out.setZero(n);
  if (x < 0.0 || x > q_max_) return;
  double denom = 0.0;
  int exact = -1;
  for (int j = 0; j < n; ++j) {
    const double d = x - nodes_[j];
    if (std::abs(d) < 1e-14 * q_max_) {
      exact = j;
      break;
    }
    out[j] = bary_[j] / d;
    denom += out[j];
  }
  if (exact >= 0) {
    out.setZero();
    out[exact] = 1.0;
    return;
  }
  out /= denom;
}

GainKernels build_gain_kernels(const RadialGrid& grid, double r, const KernelQuad& kq,
                               int threads) {
  if (!(r > 0.0) || r >= 1.0) {
    throw std::domain_error("build_gain_kernels: mass ratio must lie in (0, 1)");
  }
  GainKernels kernels;
  kernels.r = r;
  const int n = grid.size();
  for (auto& k : kernels.k) k.setZero(n, n);

  const auto gq = quad::gauss_legendre(kq.nq);
  const auto gc = quad::gauss_legendre(kq.nc);
  const auto gp = quad::gauss_legendre(kq.np);
  const double tail = kq.q_tail / std::max(1.0 - r, 0.25);

  run_rows(n, threads, [&](int i) {
    const double qi = grid.nodes()[i];
    Eigen::VectorXd interp(n);
    std::array<std::vector<quad::KahanSum>, 5> row;
    for (auto& rv : row) rv.assign(n, {});

    const double panel_edges[3] = {0.0, qi, qi + tail};
    for (int panel = 0; panel < 2; ++panel) {
      const double qa = panel_edges[panel], qb = panel_edges[panel + 1];
      if (qb <= qa) continue;
      for (int iq = 0; iq < kq.nq; ++iq) {
        const double q = qa + 0.5 * (gq.x[iq] + 1.0) * (qb - qa);
        const double wq = 0.5 * (qb - qa) * gq.w[iq];
        const double clo = std::abs(qi - q), chi = qi + q;
        if (chi <= clo) continue;
        double qpow[5];
        qpow[0] = q * wq;
        for (int m = 1; m < 5; ++m) qpow[m] = qpow[m - 1] * q;
        for (int ic = 0; ic < kq.nc; ++ic) {
          const double c = clo + 0.5 * (gc.x[ic] + 1.0) * (chi - clo);
          const double wc = 0.5 * (chi - clo) * gc.w[ic];
          const double c2 = c * c;
          const double v2 = std::max((1.0 + r) * (r * qi * qi + q * q) - r * c2, 0.0);
          const double vdotc = 0.5 * ((1.0 + r) * (qi * qi - q * q) - (1.0 - r) * c2);
          const double t1 = std::max(v2 * c2 - vdotc * vdotc, 0.0);
          const double plo = std::abs(c - q), phi = c + q;
          for (int ip = 0; ip < kq.np; ++ip) {
            const double qp = plo + 0.5 * (gp.x[ip] + 1.0) * (phi - plo);
            if (qp > grid.q_max()) continue;
            const double wp = 0.5 * (phi - plo) * gp.w[ip];
            const double mu_num = qp * qp - c2 - q * q;  // = 2 c q mu
            const double t2 = std::max(4.0 * c2 * q * q - mu_num * mu_num, 0.0);
            const double arg = r * std::sqrt(t1 * t2) / c2;
            const double expo = -v2 - r * r * q * q - r * vdotc * mu_num / c2 + arg;
            const double w4 = std::exp(expo) * gsl_sf_bessel_I0_scaled(arg) * qp * wp * wc;
            grid.interp_row(qp, interp);
            for (int j = 0; j < n; ++j) {
              if (interp[j] == 0.0) continue;
              const double base = w4 * interp[j];
              for (int m = 0; m < 5; ++m) row[m][j].add(base * qpow[m]);
            }
          }
        }
      }
    }
    const double pref = 4.0 * kSqrtPi / qi;
    for (int m = 0; m < 5; ++m) {
      for (int j = 0; j < n; ++j) kernels.k[m](i, j) = pref * row[m][j].value();
    }
  });
  return kernels;
}

ScaledProblem scale_problem(const BathSpec& bath, const ChannelPair& pair, double ref_length) {
  bath.validate();
  pair.validate();
  if (!(ref_length > 0.0)) throw std::domain_error("scale_problem: ref_length must be > 0");
  const double l = ref_length;
  ScaledProblem p;
  p.theta = dimensionless_temperature(bath, l);
  p.r = bath.mass_ratio();
  p.kappa_level = Complex(0.0, 1.0) * (pair.nu_prime.energy - pair.nu.energy) * bath.m /
                  (constants::hbar * constants::hbar * bath.n_gas * l);
  const auto scale = [l](const Channel& ch) {
    return ScaledChannel{ch.a / l, ch.b_red / (l * l), ch.c_red / (l * l * l)};
  };
  p.nu = scale(pair.nu);
  p.nu_prime = scale(pair.nu_prime);
  p.rho0 = pair.rho0;
  p.pair_tag = pair.nu.label + "|" + pair.nu_prime.label;
  return p;
}

double tau_from_time(const BathSpec& bath, double t, double ref_length) {
  return t * constants::hbar * bath.n_gas * ref_length / bath.m;
}

double time_from_tau(const BathSpec& bath, double tau, double ref_length) {
  return tau * bath.m / (constants::hbar * bath.n_gas * ref_length);
}

MasterOperator::MasterOperator(const ScaledProblem& problem,
                               std::shared_ptr<const RadialGrid> grid,
                               std::shared_ptr<const GainKernels> kernels)
    : problem_(problem), grid_(std::move(grid)), kernels_(std::move(kernels)) {
  if (!grid_ || !kernels_) throw std::invalid_argument("MasterOperator: null grid or kernels");
  if (std::abs(kernels_->r - problem_.r) > 1e-12 * std::max(1.0, problem_.r)) {
    throw std::invalid_argument("MasterOperator: kernels were built for a different mass ratio");
  }
  if (problem_.theta < 0.0) throw std::domain_error("MasterOperator: theta must be >= 0");

  const int n = grid_->size();
  const double r = problem_.r;
  const Eigen::VectorXd& Q = grid_->nodes();

  loss_moment_[0] = Eigen::VectorXd::Constant(n, 1.0 / std::pow(1.0 + r, 3));
  loss_moment_[1].resize(n);
  loss_moment_[2].resize(n);
  for (int i = 0; i < n; ++i) {
    const double s = r * Q[i];
    loss_moment_[1][i] = gaussian_mean_shifted_norm(s) / std::pow(1.0 + r, 4);
    loss_moment_[2][i] = (1.5 + s * s) / std::pow(1.0 + r, 5);
  }

  // Assemble the full operator matrix once; evolution is then matrix-vector.
  const Complex i_unit(0.0, 1.0);
  const ScaledChannel& A = problem_.nu;
  const ScaledChannel& B = problem_.nu_prime;
  const Complex df[3] = {-(A.a - std::conj(B.a)), A.b - std::conj(B.b), A.c - std::conj(B.c)};
  const Complex ff[5] = {A.a * std::conj(B.a),
                         -(A.a * std::conj(B.b) + A.b * std::conj(B.a)),
                         A.b * std::conj(B.b) + A.a * std::conj(B.c) + A.c * std::conj(B.a),
                         -(A.b * std::conj(B.c) + A.c * std::conj(B.b)),
                         A.c * std::conj(B.c)};
  const double pref = std::pow(1.0 + r, 4);
  const double st = std::sqrt(problem_.theta);

  g_full_.setZero(n, n);
  for (int i = 0; i < n; ++i) {
    Complex loss = df[0] * loss_moment_[0][i];
    loss += st * df[1] * loss_moment_[1][i];
    loss += problem_.theta * df[2] * loss_moment_[2][i];
    g_full_(i, i) = problem_.kappa_level + pref * 2.0 * kPi * i_unit * loss;
  }
  double tp = st;  // theta^{(1+m)/2}
  for (int m = 0; m < 5; ++m) {
    if (tp != 0.0 && ff[m] != 0.0) g_full_ += (pref * tp * ff[m]) * kernels_->k[m];
    tp *= st;
  }

  op_norm_ = 0.0;
  for (int i = 0; i < n; ++i) {
    double s = 0.0;
    for (int j = 0; j < n; ++j) s += std::abs(g_full_(i, j));
    op_norm_ = std::max(op_norm_, s);
  }
}

GammaField MasterOperator::init_gamma() const {
  GammaField f;
  f.theta = problem_.theta;
  f.r = problem_.r;
  f.pair_tag = problem_.pair_tag;
  const int n = grid_->size();
  f.values.resize(n);
  const double norm = std::pow(problem_.r / kPi, 1.5);
  for (int i = 0; i < n; ++i) {
    const double q = grid_->nodes()[i];
    f.values[i] = problem_.rho0 * norm * std::exp(-problem_.r * q * q);
  }
  return f;
}

Complex MasterOperator::kappa0() const {
  return problem_.kappa_level -
         2.0 * kPi * Complex(0.0, 1.0) * (problem_.nu.a - std::conj(problem_.nu_prime.a)) *
             (1.0 + problem_.r);
}

GammaField MasterOperator::apply(const GammaField& field, GPart part) const {
  const int n = grid_->size();
  if (field.values.size() != n) {
    throw std::invalid_argument("apply: field does not match the operator grid");
  }
  const ScaledChannel& A = problem_.nu;
  const ScaledChannel& B = problem_.nu_prime;
  const Complex i_unit(0.0, 1.0);
  const double pref = std::pow(1.0 + problem_.r, 4);

  GammaField out = field;
  switch (part) {
    case GPart::full:
      out.values = g_full_ * field.values;
      break;
    case GPart::g0: {
      const Complex k0 = kappa0();
      out.values = k0 * field.values;
      break;
    }
    case GPart::g1: {
      const Complex dfb = A.b - std::conj(B.b);
      out.values = (pref * 2.0 * kPi * i_unit * dfb) *
                   loss_moment_[1].cast<Complex>().cwiseProduct(field.values);
      out.values += (pref * A.a * std::conj(B.a)) * (kernels_->k[0] * field.values);
      break;
    }
    case GPart::g2: {
      const Complex dfc = A.c - std::conj(B.c);
      out.values = (pref * 2.0 * kPi * i_unit * dfc) *
                   loss_moment_[2].cast<Complex>().cwiseProduct(field.values);
      out.values += (pref * -(A.a * std::conj(B.b) + A.b * std::conj(B.a))) *
                    (kernels_->k[1] * field.values);
      break;
    }
  }
  return out;
}

Complex MasterOperator::reduce(const GammaField& field) const {
  quad::KahanSum re, im;
  const int n = grid_->size();
  for (int i = 0; i < n; ++i) {
    const double w = grid_->weights()[i] * grid_->nodes()[i] * grid_->nodes()[i];
    re.add(w * field.values[i].real());
    im.add(w * field.values[i].imag());
  }
  return 4.0 * kPi * Complex(re.value(), im.value());
}

void MasterOperator::step_rk4(Eigen::VectorXcd& g, double dt, Eigen::VectorXcd scratch[4]) const {
  scratch[0].noalias() = g_full_ * g;
  scratch[3] = g + (0.5 * dt) * scratch[0];
  scratch[1].noalias() = g_full_ * scratch[3];
  scratch[3] = g + (0.5 * dt) * scratch[1];
  scratch[2].noalias() = g_full_ * scratch[3];
  scratch[3] = g + dt * scratch[2];
  scratch[1] += scratch[2];
  scratch[2].noalias() = g_full_ * scratch[3];
  g += (dt / 6.0) * (scratch[0] + 2.0 * scratch[1] + scratch[2]);
}

double MasterOperator::pick_dt(double tau_end, double dt) const {
  if (dt > 0.0) return dt;
  const double nrm = std::max(op_norm_, 1e-30);
  double step = kStabilityFraction / nrm;
  // Keep the accumulated local truncation error ~ (||G|| dt)^5/120 per step
  // below the target over the whole run.
  const double acc =
      std::pow(120.0 * kLocalErrorTarget / (std::pow(nrm, 5) * std::max(tau_end, 1e-30)), 0.25);
  return std::min(step, acc);
}

GammaField MasterOperator::evolve(const GammaField& start, double tau_end, double dt) const {
  if (tau_end < 0.0) throw std::domain_error("evolve: tau_end must be >= 0");
  std::vector<Sample> none;
  GammaField f = start;
  if (tau_end == 0.0) return f;
  const double step = pick_dt(tau_end, dt);
  const long nsteps = std::max<long>(1, static_cast<long>(std::ceil(tau_end / step)));
  const double h = tau_end / static_cast<double>(nsteps);
  Eigen::VectorXcd scratch[4];
  for (auto& s : scratch) s.resize(grid_->size());
  const double guard = kNormGrowthGuard * start.values.cwiseAbs().maxCoeff() + 1e-300;
  for (long k = 0; k < nsteps; ++k) {
    step_rk4(f.values, h, scratch);
    if ((k & 0xf) == 0 && f.values.cwiseAbs().maxCoeff() > guard) {
      throw NumericalError(
          "evolve: field norm grew beyond the dissipative bound (tau = " +
          std::to_string((k + 1) * h) + ", dt = " + std::to_string(h) +
          "); reduce the time step or check the channel data");
    }
  }
  return f;
}

std::vector<MasterOperator::Sample> MasterOperator::evolve_sampled(const GammaField& start,
                                                                   std::span<const double> taus,
                                                                   double dt) const {
  std::vector<Sample> out;
  out.reserve(taus.size());
  GammaField f = start;
  double tau = 0.0;
  Eigen::VectorXcd scratch[4];
  for (auto& s : scratch) s.resize(grid_->size());
  const double guard = kNormGrowthGuard * start.values.cwiseAbs().maxCoeff() + 1e-300;
  double tau_total = taus.empty() ? 0.0 : taus.back();
  const double step = pick_dt(std::max(tau_total, 1e-30), dt);
  for (double target : taus) {
    if (target < tau) throw std::domain_error("evolve_sampled: times must be ascending");
    const double gap = target - tau;
    if (gap > 0.0) {
      const long nsteps = std::max<long>(1, static_cast<long>(std::ceil(gap / step)));
      const double h = gap / static_cast<double>(nsteps);
      for (long k = 0; k < nsteps; ++k) {
        step_rk4(f.values, h, scratch);
        if ((k & 0xf) == 0 && f.values.cwiseAbs().maxCoeff() > guard) {
          throw NumericalError("evolve_sampled: field norm grew beyond the dissipative bound");
        }
      }
      tau = target;
    }
    out.push_back({target, reduce(f)});
  }
  return out;
}

GammaField init_gamma(const MasterOperator& op) { return op.init_gamma(); }

GammaField apply_G(const MasterOperator& op, const GammaField& field, GPart part) {
  return op.apply(field, part);
}

GammaField evolve(const MasterOperator& op, const GammaField& field, double tau_end, double dt) {
  return op.evolve(field, tau_end, dt);
}

Complex reduce_rho(const MasterOperator& op, const GammaField& field) { return op.reduce(field); }

}  // namespace decokin::oracle
