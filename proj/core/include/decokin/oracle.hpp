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

#include <Eigen/Dense>
#include <array>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "decokin/scattering.hpp"

// Direct numerical integration of the isotropic s-wave master equation on a
// radial momentum grid. Works in the dimensionless variables
//
//   theta = 2 m k_B T l^2 / hbar^2,   Q = P l / (hbar sqrt(theta)),
//   tau   = t hbar n_gas l / m,
//
// for a reference length l that cancels from every physical result. The
// evolution equation for the pseudodistribution gamma_{nu nu'}(Q, tau) is
//
//   d gamma / d tau = G[gamma],
//
//   G[h](Q) = kappa_level h(Q) + (1+r)^4 {
//       h(Q) * Integral d3q (2 pi i / l)[f_nu(p_q) - f*_nu'(p_q)]
//              exp(-[r Q + (1+r) q]^2) / pi^{3/2}
//     + theta^{1/2} Integral d3q d2n (f_nu(p_q) f*_nu'(p_q) / l^2) q
//              h(|Q - q + q n|) exp(-(r Q + r q n + q)^2) / pi^{3/2} },
//
// with p_q = (hbar sqrt(theta)/l) q and kappa_level the level-splitting
// phase rate. This scaled operator is re-derived here from the unscaled
// master equation rather than transcribed: converting d/dt to d/d tau
// multiplies the collision prefactor n_gas (1+r)^3 / m* by m / (hbar n l),
// and m / m* = 1 + r supplies the fourth power of (1+r).
//
// For truncated s-wave amplitudes the amplitude products are polynomials in
// theta^{1/2} q, so the gain term decomposes over monomial kernels with
// weights q^{1+m}, m = 0..4, that depend only on the mass ratio r. Each
// kernel is reduced, exploiting isotropy, to a dense radial matrix: the
// double angular integral collapses to nested one-dimensional integrals over
// (q, c = |Q - q_vec|, Q' = |Q - q_vec + q n|) with the azimuthal integral
// evaluated as a scaled Bessel I0, and the field value at Q' is projected
// back onto the grid by barycentric interpolation.
namespace decokin::oracle {

struct GridParams {
  int nodes = 128;
  double span = 6.0;  // Q_max = span / sqrt(r); covers the initial Gaussian to e^{-span^2}
};

struct KernelQuad {
  int nq = 48;         // radial q nodes per panel (two panels, split at Q)
  int nc = 28;         // impact-radius c nodes
  int np = 20;         // output-radius Q' nodes
  double q_tail = 9.0; // q integration reach beyond the kink, scaled by 1/(1-r)
};

class RadialGrid {
 public:
  static RadialGrid make(double r, const GridParams& params = {});

  int size() const { return static_cast<int>(nodes_.size()); }
  double q_max() const { return q_max_; }
  const Eigen::VectorXd& nodes() const { return nodes_; }
  const Eigen::VectorXd& weights() const { return weights_; }
  const Eigen::VectorXd& barycentric() const { return bary_; }

  // Barycentric interpolation weights at x for values on the grid nodes;
  // returns a zero row for x outside [0, q_max].
  void interp_row(double x, Eigen::VectorXd& out) const;

 private:
  double q_max_ = 0.0;
  Eigen::VectorXd nodes_, weights_, bary_;
};

// Channel-independent monomial gain kernels for one mass ratio. Cost is paid
// once; every operator for the same (r, grid) reuses them.
struct GainKernels {
  double r = 0.0;
  std::array<Eigen::MatrixXd, 5> k;
};

// threads <= 0 selects the hardware concurrency. The result is byte-identical
// for any thread count: each matrix element is an independent fixed-order sum.
GainKernels build_gain_kernels(const RadialGrid& grid, double r,
                               const KernelQuad& kq = {}, int threads = 1);

// Dimensionless channel coefficients: a/l, b_red/l^2, c_red/l^3.
struct ScaledChannel {
  Complex a{}, b{}, c{};
};

struct ScaledProblem {
  double theta = 0.0;
  double r = 0.0;
  Complex kappa_level{};  // i (eps_nu' - eps_nu) m / (hbar^2 n_gas l)
  ScaledChannel nu, nu_prime;
  Complex rho0{};
  std::string pair_tag;
};

// SI -> scaled conversion for the ordered pair (nu, nu').
ScaledProblem scale_problem(const BathSpec& bath, const ChannelPair& pair,
                            double ref_length = 1e-9);
double tau_from_time(const BathSpec& bath, double t, double ref_length = 1e-9);
double time_from_tau(const BathSpec& bath, double tau, double ref_length = 1e-9);

struct GammaField {
  Eigen::VectorXcd values;  // gamma(Q_i)
  double theta = 0.0;
  double r = 0.0;
  std::string pair_tag;
};

enum class GPart { full, g0, g1, g2 };

// The scaled collision operator for one ordered channel pair on a shared
// radial grid. apply() and evolve() are const and safe to call concurrently;
// fields are value types.
class MasterOperator {
 public:
  MasterOperator(const ScaledProblem& problem, std::shared_ptr<const RadialGrid> grid,
                 std::shared_ptr<const GainKernels> kernels);

  const RadialGrid& grid() const { return *grid_; }
  const ScaledProblem& problem() const { return problem_; }

  // gamma(Q, 0) = rho0 (r/pi)^{3/2} exp(-r Q^2)
  GammaField init_gamma() const;

  GammaField apply(const GammaField& field, GPart part = GPart::full) const;

  // Scalar rate of the theta-independent part; at theta = 0 the evolution is
  // exactly gamma(0) e^{kappa0 tau}.
  Complex kappa0() const;

  // 4 pi Integral Q^2 gamma(Q) dQ by grid quadrature (fixed-order compensated
  // summation).
  Complex reduce(const GammaField& field) const;

  // Classical explicit 4th-order time stepping of d gamma/d tau = G[gamma].
  // dt = 0 picks a step from the operator norm (stability) and the local
  // error target (accuracy). Throws NumericalError if the field norm grows
  // beyond what a dissipative operator permits.
  GammaField evolve(const GammaField& start, double tau_end, double dt = 0.0) const;

  struct Sample {
    double tau = 0.0;
    Complex rho{};
  };
  // Evolution with intermediate reductions at the requested ascending times.
  std::vector<Sample> evolve_sampled(const GammaField& start, std::span<const double> taus,
                                     double dt = 0.0) const;

  double op_norm_inf() const { return op_norm_; }

 private:
  void step_rk4(Eigen::VectorXcd& g, double dt, Eigen::VectorXcd scratch[4]) const;
  double pick_dt(double tau_end, double dt) const;

  ScaledProblem problem_;
  std::shared_ptr<const RadialGrid> grid_;
  std::shared_ptr<const GainKernels> kernels_;
  Eigen::MatrixXcd g_full_;
  Eigen::VectorXd loss_moment_[3];  // l_m(Q), m = 0..2
  double op_norm_ = 0.0;
};

// Spec-level convenience wrappers.
GammaField init_gamma(const MasterOperator& op);
GammaField apply_G(const MasterOperator& op, const GammaField& field, GPart part);
GammaField evolve(const MasterOperator& op, const GammaField& field, double tau_end,
                  double dt = 0.0);
Complex reduce_rho(const MasterOperator& op, const GammaField& field);

}  // namespace decokin::oracle
