// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The gvm-spectral Authors

#include <doctest.h>

#include <cmath>
#include <random>

#include "gvm/error.hpp"
#include "gvm/estimation.hpp"
#include "gvm/spectrum.hpp"
#include "oracles.hpp"

using namespace gvm;

namespace {

const double i0_1 = static_cast<double>(oracle::bessel_i(0, 1.0L));
const double i1_1 = static_cast<double>(oracle::bessel_i(1, 1.0L));

GvMParams random_params(std::mt19937_64& rng, int k) {
  std::uniform_real_distribution<double> u(-1.0, 1.0), kap(0.0, 3.0), s2(0.3, 3.0);
  GvMParams p;
  p.sigma2 = s2(rng);
  for (int j = 1; j <= k; ++j) {
    p.mus.push_back(wrap_angle(pi * u(rng), two_pi / j));
    p.kappas.push_back(kap(rng));
  }
  return p;
}

}  // namespace

TEST_CASE("angle helpers") {
  CHECK(wrap_angle(pi) == doctest::Approx(pi));
  CHECK(wrap_angle(-pi) == doctest::Approx(pi));
  CHECK(wrap_angle(3 * pi / 2) == doctest::Approx(-pi / 2));
  CHECK(wrap_angle(2.0, pi) == doctest::Approx(2.0 - pi));
  CHECK(reduce_angle(-0.5, pi) == doctest::Approx(pi - 0.5));
}

TEST_CASE("GvMParams invariants") {
  GvMParams p = GvMParams::von_mises(0.5, 1.0);
  CHECK_NOTHROW(p.validate());
  p.kappas[0] = -1.0;
  CHECK_THROWS_AS(p.validate(), Error);
  GvMParams q{1.0, {0.1, 2.0}, {1.0, 1.0}};  // mu_2 outside (-pi/2, pi/2]
  CHECK_THROWS_AS(q.validate(), Error);
  GvMParams z{0.0, {0.0}, {1.0}};
  CHECK_THROWS_AS(z.validate(), Error);
  GvMParams c{1.0, {0.7, 0.3}, {1.0, 0.0}};
  CHECK(c.canonical().mus[1] == 0.0);
}

TEST_CASE("shape round trip") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    const GvMParams p = random_params(rng, 3);
    const GvMParams q = GvMParams::from_shape(p.sigma2, p.mus[0], p.shape());
    for (int j = 0; j < 3; ++j) CHECK(q.mus[j] == doctest::Approx(p.mus[j]).epsilon(1e-12));
  }
}

TEST_CASE("density examples") {
  CHECK(gvm_density(GvMParams::uniform(), 1.3) == doctest::Approx(1.0 / two_pi).epsilon(1e-15));
  CHECK(gvm_density(GvMParams::von_mises(0.0, 1.0), 0.0) ==
        doctest::Approx(std::exp(1.0) / (two_pi * i0_1)).epsilon(1e-14));
  CHECK(gvm_density(GvMParams::von_mises(0.0, 1.0), 0.0) == doctest::Approx(0.3417104886).epsilon(1e-10));
}

TEST_CASE("density integrates to sigma2 and matches the oracle") {
  std::mt19937_64 rng(5);
  for (int k = 1; k <= 3; ++k)
    for (int trial = 0; trial < 6; ++trial) {
      const GvMParams p = random_params(rng, k);
      const GvMSpectrum s(p);
      CHECK(quad_periodic([&](double t) { return s.density(t); }) == doctest::Approx(p.sigma2).epsilon(1e-10));
      const oracle::Density f(p.sigma2, p.mus, p.kappas);
      for (double t : {-3.0, -1.0, 0.2, 2.9})
        CHECK(s.density(t) == doctest::Approx(static_cast<double>(f(t))).epsilon(1e-12));
    }
}

TEST_CASE("cdf contract") {
  const GvMParams sym{1.0, {0.0, 0.0}, {1.0, 0.5}};
  CHECK(gvm_cdf(sym, 0.0) == doctest::Approx(0.5).epsilon(1e-12));
  std::mt19937_64 rng(7);
  for (int k = 1; k <= 3; ++k) {
    const GvMParams p = random_params(rng, k);
    const GvMSpectrum s(p);
    CHECK(s.cdf(-pi) == 0.0);
    CHECK(s.cdf(pi) == p.sigma2);
    double prev = 0.0;
    for (int i = 0; i <= 1024; ++i) {
      const double t = -pi + two_pi * i / 1024;
      const double v = s.cdf(t);
      CHECK(v >= prev);
      prev = v;
      if (i > 0 && i < 1024) {
        const double h = 1e-5;
        CHECK(std::abs((s.cdf(t + h) - s.cdf(t - h)) / (2 * h) - s.density(t)) < 1e-5);
      }
    }
    const oracle::Density f(p.sigma2, p.mus, p.kappas);
    for (double t : {-2.5, -0.4, 1.0, 3.0}) {
      // integral over [-pi, t] by Gauss-free trapezoid on a fine nonperiodic grid
      const int n = 20000;
      long double acc = 0.5L * (f(-oracle::pi_l) + f(t));
      for (int i = 1; i < n; ++i) acc += f(-oracle::pi_l + (t + oracle::pi_l) * i / n);
      const double ref = static_cast<double>(acc * (t + oracle::pi_l) / n);
      CHECK(std::abs(s.cdf(t) - ref) < 1e-7);
    }
  }
}

TEST_CASE("increment variance") {
  const GvMParams p = GvMParams::von_mises(0.3, 2.0, 1.7);
  CHECK(spectral_increment_variance(p, -pi, pi) == doctest::Approx(1.7).epsilon(1e-14));
  CHECK(spectral_increment_variance(GvMParams::uniform(), -pi / 2, pi / 2) == doctest::Approx(0.5).epsilon(1e-12));
  double prev = 1.0;
  for (double eps = 0.5; eps > 1e-6; eps /= 2) {
    const double v = spectral_increment_variance(p, 1.0 - eps, 1.0);
    CHECK(v < prev);
    CHECK(v >= 0.0);
    prev = v;
  }
  CHECK_THROWS_AS(spectral_increment_variance(p, 1.0, 0.5), Error);
}

TEST_CASE("acvf: von Mises closed form and Fourier oracle") {
  const GvMParams vm = GvMParams::von_mises(0.5, 1.0, 1.3);
  const Acvf a = gvm_acvf(vm, 6);
  for (int r = 1; r <= 6; ++r) {
    const double ratio = static_cast<double>(oracle::bessel_i(r, 1.0L) / oracle::bessel_i(0, 1.0L));
    const auto expected = 1.3 * ratio * std::polar(1.0, r * 0.5);
    CHECK(std::abs(a(r) - expected) < 1e-13);
  }
  CHECK(std::abs(gvm_acvf(GvMParams::uniform(1.0, 2), 4)(3)) == 0.0);

  std::mt19937_64 rng(9);
  for (int k = 1; k <= 3; ++k) {
    const GvMParams p = random_params(rng, k);
    const Acvf b = gvm_acvf(p, 8);
    const oracle::Density f(p.sigma2, p.mus, p.kappas);
    CHECK(b.sigma2 == p.sigma2);
    for (int r = 1; r <= 8; ++r) {
      const auto ref = oracle::fourier(f, r);
      CHECK(std::abs(b(r).real() - static_cast<double>(ref.real())) < 1e-9);
      CHECK(std::abs(b(r).imag() - static_cast<double>(ref.imag())) < 1e-9);
    }
  }
}

TEST_CASE("entropy closed forms") {
  CHECK(gvm_entropy(GvMParams::uniform(2.0, 2)) == 0.0);
  const double s1 = gvm_entropy(GvMParams::von_mises(0.0, 1.0));
  CHECK(s1 == doctest::Approx(std::log(i0_1) - i1_1 / i0_1).epsilon(1e-13));
  CHECK(s1 == doctest::Approx(-0.2104756).epsilon(1e-6));
  CHECK(gvm_entropy(GvMParams::von_mises(0.0, 1.0, 2.0)) == doctest::Approx(2 * s1).epsilon(1e-13));

  GvMParams p2 = GvMParams::from_shape(1.0, 0.0, GvMShape{{0.4}, {1.2, 0.7}});
  const GvMSpectrum s2(p2);
  CHECK(s2.entropy() == doctest::Approx(spectral_entropy(s2.tabulate(8192))).epsilon(1e-9));
  CHECK(gvm_entropy(GvMParams::von_mises(0.0, 1.0)) > gvm_entropy(GvMParams::von_mises(0.0, 1.5)));
}

TEST_CASE("kl_information and spectral_entropy on tables") {
  const auto u = TabulatedDensity::uniform(1.0);
  const auto vm = GvMSpectrum(GvMParams::von_mises(0.0, 1.0)).tabulate();
  CHECK(kl_information(u, u) == 0.0);
  CHECK(kl_information(vm, vm) == 0.0);
  CHECK(kl_information(vm, u) == doctest::Approx(i1_1 / i0_1 - std::log(i0_1)).epsilon(1e-12));
  CHECK(std::abs(spectral_entropy(u)) < 1e-15);
  CHECK(spectral_entropy(vm) == doctest::Approx(-0.2104756).epsilon(1e-6));
  const auto vm2 = GvMSpectrum(GvMParams::von_mises(0.0, 1.0, 2.0)).tabulate();
  CHECK(spectral_entropy(vm2) == doctest::Approx(-0.4209511).epsilon(1e-6));
  // different grids
  CHECK(kl_information(vm, TabulatedDensity::uniform(1.0, 1024)) ==
        doctest::Approx(kl_information(vm, u)).epsilon(1e-9));
  // mass mismatch and support violation
  CHECK_THROWS_AS(kl_information(vm, TabulatedDensity::uniform(2.0)), Error);
  std::vector<double> holes(64, 2.0 / two_pi);
  for (int i = 0; i < 32; ++i) holes[i] = 0.0;
  const TabulatedDensity g(holes, 1.0);  // half the grid at 2 / (2 pi), half at zero
  try {
    kl_information(TabulatedDensity::uniform(g.mass(), 64), g);
    FAIL("expected infinite divergence");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::infinite_divergence);
  }
}

TEST_CASE("exponential tilt") {
  const auto h = GvMSpectrum(GvMParams::von_mises(1.0, 0.8, 2.0)).tabulate(2048);
  const auto same = exponential_tilt(h, Tilt{{0.0}, {0.0}});
  for (std::size_t i = 0; i < h.size(); i += 97) CHECK(same.values()[i] == doctest::Approx(h.values()[i]));

  const GvMParams p{1.5, {0.4, -0.3}, {1.1, 0.6}};
  const auto tilted = exponential_tilt(TabulatedDensity::uniform(1.5, 2048), Tilt::of(p));
  const GvMSpectrum s(p);
  for (std::size_t i = 0; i < tilted.size(); i += 101)
    CHECK(tilted.values()[i] == doctest::Approx(s.density(tilted.theta(i))).epsilon(1e-12));
  CHECK(tilted.mass() == doctest::Approx(1.5));
}

TEST_CASE("kl_bound") {
  const Acvf white = Acvf::white_noise(1.0, 2);
  CHECK(kl_bound(Tilt{{0.0, 0.0}, {0.0, 0.0}}, white) == doctest::Approx(0.0));
  // uniform reference: bound at matched parameters equals minus the entropy
  const GvMParams p{1.0, {0.5, 0.2}, {1.0, 0.4}};
  const Acvf target = gvm_acvf(p, 2);
  CHECK(kl_bound(Tilt::of(p), target) == doctest::Approx(-gvm_entropy(p)).epsilon(1e-11));
  // mismatched parameters give a smaller value
  const Tilt off{{0.2, 0.0}, {0.7, 0.1}};
  CHECK(kl_bound(off, target) <= kl_bound(Tilt::of(p), target) + 1e-12);
}

TEST_CASE("tilt of a non-uniform reference attains the bound") {
  const auto h = GvMSpectrum(GvMParams::von_mises(-0.8, 0.9, 1.0)).tabulate(4096);
  const GvMParams goal{1.0, {0.5, -0.2}, {0.9, 0.5}};
  const Acvf target = gvm_acvf(goal, 2);
  const FitReport fit = solve_moments(target, 2, h);
  REQUIRE(fit.converged);
  const Tilt t = Tilt::of(fit.params);
  const auto g = exponential_tilt(h, t);
  CHECK(moment_residual(target, t, h) < 1e-9);
  CHECK(kl_information(g, h) == doctest::Approx(kl_bound(t, target, h)).epsilon(1e-8));
}
