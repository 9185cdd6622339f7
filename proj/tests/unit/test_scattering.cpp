#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "decokin/constants.hpp"
#include "decokin/errors.hpp"
#include "decokin/scattering.hpp"
#include "support/test_oracles.hpp"

using namespace decokin;
namespace cn = decokin::constants;

namespace {
Channel make_channel(Complex a, Complex b_red = {}, Complex c_red = {}) {
  Channel ch;
  ch.label = "test";
  ch.a = a;
  ch.b_red = b_red;
  ch.c_red = c_red;
  return ch;
}

Channel random_channel(std::mt19937_64& rng) {
  std::normal_distribution<double> n;
  return make_channel({2e-9 * n(rng), -std::abs(1e-9 * n(rng))},
                      {1e-18 * n(rng), 1e-18 * n(rng)}, {1e-27 * n(rng), 1e-27 * n(rng)});
}
}  // namespace

TEST_CASE("amplitude at zero momentum is -a") {
  const auto ch = make_channel({5e-9, -1e-9}, {2e-18, 3e-18}, {1e-27, 0.0});
  CHECK(amplitude(ch, 0.0) == -ch.a);
}

TEST_CASE("amplitude with only the quadratic term") {
  const auto ch = make_channel({0.0, 0.0}, {0.0, 0.0}, {4e-27, -1e-27});
  const double p = cn::hbar * 2e6;  // p/hbar = 2e6 1/m
  const Complex expected = ch.c_red * 4e12;
  CHECK(std::abs(amplitude(ch, p) - expected) <= 1e-15 * std::abs(expected));
}

TEST_CASE("amplitude matches the arbitrary-precision reference") {
  // a = (5 - 1i) nm, b_red = (2 + 0.5i)e-18 m^2, c_red = 0, p = hbar * 1e6.
  const auto ch = make_channel({5e-9, -1e-9}, {2e-18, 0.5e-18});
  const Complex f = amplitude(ch, cn::hbar * 1e6);
  CHECK(f.real() == doctest::Approx(-4.998e-9).epsilon(1e-15));
  CHECK(f.imag() == doctest::Approx(1.0005e-9).epsilon(1e-15));
}

TEST_CASE("amplitude rejects negative momentum") {
  const auto ch = make_channel({1e-9, 0.0});
  CHECK_THROWS_AS(amplitude(ch, -1.0), std::domain_error);
}

TEST_CASE("inelastic cross section dominates at small momentum when beta > 0") {
  const auto ch = make_channel({5e-9, -1e-9}, {2e-18, 0.5e-18});
  const double p = cn::hbar * 1e3;  // very low momentum
  const auto cs = cross_sections(ch, p);
  const double leading = 4.0 * std::numbers::pi * cn::hbar * ch.beta() / p;
  CHECK(cs.inelastic == doctest::Approx(leading).epsilon(1e-3));
  CHECK(cs.inelastic > 0.99 * cs.total);
}

TEST_CASE("purely elastic unitarity case has vanishing p^0 inelastic term") {
  // a real, b_red = i a^2: the p-independent coefficient Im(b_red) - |a|^2
  // cancels, so inelastic keeps only the (vanishing) beta/p term.
  const double a = 4e-9;
  const auto ch = make_channel({a, 0.0}, {0.0, a * a});
  const auto cs = cross_sections(ch, cn::hbar * 1e5);
  CHECK(std::abs(cs.inelastic) <= 1e-15 * cs.total);
}

TEST_CASE("elastic cross section leading term") {
  const auto ch = make_channel({5e-9, 0.0});
  const auto cs = cross_sections(ch, cn::hbar * 1.0);
  CHECK(cs.elastic == doctest::Approx(3.141592653589793e-16).epsilon(1e-12));
}

TEST_CASE("total = elastic + inelastic exactly, by construction") {
  std::mt19937_64 rng(41);
  for (int k = 0; k < 200; ++k) {
    const auto ch = random_channel(rng);
    const double p = cn::hbar * std::pow(10.0, 3.0 + 5.0 * (k % 7) / 6.0);
    const auto cs = cross_sections(ch, p);
    CHECK(cs.total - cs.elastic - cs.inelastic == 0.0);
  }
}

TEST_CASE("cross sections stay nonnegative inside the reported validity range") {
  std::mt19937_64 rng(42);
  for (int k = 0; k < 500; ++k) {
    const auto ch = random_channel(rng);
    const double limit = positivity_limit(ch);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const double p = u(rng) * std::min(limit, cn::hbar * 1e9);
    if (p <= 0.0) continue;
    const auto cs = cross_sections(ch, p);
    CHECK(cs.valid);
    CHECK(cs.total >= -1e-30);
    CHECK(cs.elastic >= -1e-30);
  }
}

TEST_CASE("negative truncated cross sections are returned with valid = false") {
  // Strongly negative Im(b_red) drives the truncated total negative.
  const auto ch = make_channel({1e-10, -1e-12}, {0.0, -1e-18});
  const double limit = positivity_limit(ch);
  CHECK(std::isfinite(limit));
  const auto cs = cross_sections(ch, 2.0 * limit);
  CHECK_FALSE(cs.valid);
  CHECK(cs.total < 0.0);
  CHECK(cs.p_positive_max == doctest::Approx(limit));
}

TEST_CASE("cross_sections rejects nonpositive momentum") {
  const auto ch = make_channel({1e-9, 0.0});
  CHECK_THROWS_AS(cross_sections(ch, 0.0), std::domain_error);
}

TEST_CASE("amplitude-difference coefficients: trivial cases") {
  std::mt19937_64 rng(43);
  const auto ch = random_channel(rng);
  const auto d_same = amp_diff_sq_coeffs(ch, ch);
  CHECK(d_same.d0 == 0.0);
  CHECK(d_same.d1 == 0.0);
  CHECK(d_same.d2 == 0.0);

  auto ch2 = ch;
  ch2.a = ch.a + Complex(1e-9, -0.5e-9);
  const auto d = amp_diff_sq_coeffs(ch, ch2);
  CHECK(d.d0 == doctest::Approx(std::norm(ch.a - ch2.a)).epsilon(1e-14));
  CHECK(d.d1 == 0.0);  // identical b's
  CHECK(d.d2 == 0.0);  // identical b's and c's
}

TEST_CASE("amplitude-difference coefficients are symmetric") {
  std::mt19937_64 rng(44);
  for (int k = 0; k < 100; ++k) {
    const auto c1 = random_channel(rng);
    const auto c2 = random_channel(rng);
    const auto d12 = amp_diff_sq_coeffs(c1, c2);
    const auto d21 = amp_diff_sq_coeffs(c2, c1);
    CHECK(d12.d0 == doctest::Approx(d21.d0).epsilon(1e-14));
    CHECK(d12.d1 == doctest::Approx(d21.d1).epsilon(1e-14));
    CHECK(d12.d2 == doctest::Approx(d21.d2).epsilon(1e-14));
  }
}

TEST_CASE("amplitude-difference coefficients match a least-squares fit of |f1 - f2|^2") {
  std::mt19937_64 rng(45);
  const auto c1 = random_channel(rng);
  const auto c2 = random_channel(rng);
  std::vector<double> ps, ys;
  for (int i = 1; i <= 12; ++i) {
    const double p = cn::hbar * 1e3 * i;  // small enough that O(p^3) is negligible
    ps.push_back(p);
    ys.push_back(std::norm(amplitude(c1, p) - amplitude(c2, p)));
  }
  // Scale p to O(1) before fitting to keep the normal equations conditioned.
  const double s = ps.back();
  std::vector<double> xs;
  for (double p : ps) xs.push_back(p / s);
  const auto fit = testor::fit_quadratic(xs, ys);
  const auto d = amp_diff_sq_coeffs(c1, c2);
  CHECK(fit.c0 == doctest::Approx(d.d0).epsilon(1e-6));
  CHECK(fit.c1 / s == doctest::Approx(d.d1).epsilon(1e-6));
  CHECK(fit.c2 / (s * s) == doctest::Approx(d.d2).epsilon(1e-4));
}

TEST_CASE("|f1 - f2|^2 minus the quadratic model vanishes as O(p^3)") {
  std::mt19937_64 rng(46);
  const auto c1 = random_channel(rng);
  const auto c2 = random_channel(rng);
  const auto d = amp_diff_sq_coeffs(c1, c2);
  const auto resid = [&](double p) {
    const double lhs = std::norm(amplitude(c1, p) - amplitude(c2, p));
    return std::abs(lhs - (d.d0 + d.d1 * p + d.d2 * p * p));
  };
  // Richardson-style check: halving p divides the residual by ~8.
  const double p0 = cn::hbar * 2e6;
  const double r1 = resid(p0), r2 = resid(p0 / 2.0), r3 = resid(p0 / 4.0);
  CHECK(r1 / r2 == doctest::Approx(8.0).epsilon(0.05));
  CHECK(r2 / r3 == doctest::Approx(8.0).epsilon(0.05));
}

TEST_CASE("type invariants are enforced") {
  Channel bad = make_channel({1e-9, +1e-10});  // beta < 0
  CHECK_THROWS_AS(bad.validate(), ValidationError);

  BathSpec bath;
  bath.m = cn::mass_he4;
  bath.M = 100.0 * cn::atomic_mass_unit;
  bath.n_gas = 1e19;
  bath.T = 1e-3;
  CHECK_NOTHROW(bath.validate());
  CHECK(bath.reduced_mass() < std::min(bath.m, bath.M));
  bath.T = 0.0;
  CHECK_THROWS_AS(bath.validate(), ValidationError);

  ChannelPair pair;
  pair.nu = make_channel({1e-9, 0.0});
  pair.nu_prime = make_channel({2e-9, 0.0});
  pair.rho0 = {0.9, 0.0};
  pair.rho0_diag_nu = 0.5;
  pair.rho0_diag_nup = 0.5;
  CHECK_THROWS_AS(pair.validate(), ValidationError);  // |rho0|^2 > product
  pair.rho0 = {0.5, 0.0};
  CHECK_NOTHROW(pair.validate());
  CHECK(pair.eta0() == doctest::Approx(1.0));
}
