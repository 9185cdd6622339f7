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

#include <benchmark/benchmark.h>

#include <memory>

#include "decokin/constants.hpp"
#include "decokin/kinetics.hpp"
#include "decokin/lightbath.hpp"
#include "decokin/oracle.hpp"

namespace {

using namespace decokin;
namespace cn = decokin::constants;

ChannelPair bench_pair() {
  ChannelPair pair;
  pair.nu.a = {5e-9, -1e-9};
  pair.nu.b_red = {2e-18, 0.5e-18};
  pair.nu_prime.a = {3e-9, -0.5e-9};
  pair.nu_prime.b_red = {-1e-18, 0.3e-18};
  pair.rho0 = {0.5, 0.0};
  pair.rho0_diag_nu = pair.rho0_diag_nup = 0.5;
  return pair;
}

BathSpec bench_bath() {
  BathSpec bath;
  bath.m = cn::mass_he4;
  bath.M = 100.0 * cn::atomic_mass_unit;
  bath.n_gas = 1e19;
  bath.T = 1e-3;
  return bath;
}

void BM_RateCoefficients(benchmark::State& state) {
  const auto bath = bench_bath();
  const auto pair = bench_pair();
  for (auto _ : state) {
    benchmark::DoNotOptimize(rate_coefficients(bath, pair));
  }
}
BENCHMARK(BM_RateCoefficients);

void BM_MassFactor(benchmark::State& state) {
  double r = 1e-5;
  for (auto _ : state) {
    benchmark::DoNotOptimize(mass_factor(r));
    r = r < 1.0 ? r * 1.5 : 1e-5;
  }
}
BENCHMARK(BM_MassFactor);

void BM_WIntegralQuadrature(benchmark::State& state) {
  const auto bath = bench_bath();
  const auto pair = bench_pair();
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        lightbath::w_integral(0, bath, pair, 1e-3, lightbath::WMode::quadrature));
  }
}
BENCHMARK(BM_WIntegralQuadrature);

void BM_KernelBuild(benchmark::State& state) {
  const double r = 0.25;
  const auto grid = oracle::RadialGrid::make(
      r, oracle::GridParams{static_cast<int>(state.range(0)), 6.0});
  for (auto _ : state) {
    benchmark::DoNotOptimize(oracle::build_gain_kernels(grid, r, oracle::KernelQuad{}, 1));
  }
}
BENCHMARK(BM_KernelBuild)->Arg(48)->Arg(96)->Unit(benchmark::kMillisecond);

void BM_Evolve(benchmark::State& state) {
  const double r = 0.25;
  auto grid = std::make_shared<const oracle::RadialGrid>(
      oracle::RadialGrid::make(r, oracle::GridParams{128, 6.0}));
  auto kernels = std::make_shared<const oracle::GainKernels>(
      oracle::build_gain_kernels(*grid, r, oracle::KernelQuad{}, 1));
  oracle::ScaledProblem p;
  p.r = r;
  p.theta = 1e-3;
  p.nu = {{0.45, -0.12}, {0.15, 0.08}, {0.0, 0.0}};
  p.nu_prime = {{0.30, -0.05}, {-0.10, 0.05}, {0.0, 0.0}};
  p.rho0 = {0.5, 0.2};
  const oracle::MasterOperator op(p, grid, kernels);
  const auto g0 = op.init_gamma();
  for (auto _ : state) {
    benchmark::DoNotOptimize(op.evolve(g0, 0.1));
  }
}
BENCHMARK(BM_Evolve)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
