// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The gvm-spectral Authors

#include "gvm/gaussian.hpp"

#include <cmath>
#include <random>
#include <string>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include "fft.hpp"
#include "gvm/error.hpp"

namespace gvm {

Eigen::MatrixXd realified_covariance(const Acvf& acvf) {
  const int n = acvf.max_lag() + 1;
  Eigen::MatrixXd sigma(2 * n, 2 * n);
  for (int l = 0; l < n; ++l) {
    for (int m = 0; m < n; ++m) {
      const auto psi = acvf(l - m);
      sigma(l, m) = 0.5 * psi.real();
      sigma(n + l, n + m) = 0.5 * psi.real();
      sigma(l, n + m) = -0.5 * psi.imag();
      sigma(n + l, m) = 0.5 * psi.imag();
    }
  }
  return sigma;
}

GaussianModel build_sigma(const Acvf& acvf) {
  acvf.validate();
  GaussianModel model{acvf, realified_covariance(acvf)};
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(model.sigma, Eigen::EigenvaluesOnly);
  const double lo = solver.eigenvalues().minCoeff();
  if (lo < -1e-10 * acvf.sigma2)
    throw Error(ErrorKind::invalid_argument,
                "build_sigma: inconsistent autocovariance, covariance has eigenvalue " + std::to_string(lo));
  return model;
}

double temporal_entropy(const GaussianModel& model) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(model.sigma, Eigen::EigenvaluesOnly);
  const auto& ev = solver.eigenvalues();
  const double top = ev.maxCoeff();
  if (!(ev.minCoeff() > 1e-14 * top))
    throw Error(ErrorKind::degenerate, "temporal_entropy: degenerate distribution, entropy undefined");
  double log_det = 0.0;
  for (Eigen::Index i = 0; i < ev.size(); ++i) log_det += std::log(ev(i));
  return (1.0 + std::log(two_pi)) * model.times() + 0.5 * log_det;
}

void SimConfig::validate() const {
  if (length < 1) throw Error(ErrorKind::invalid_argument, "SimConfig: length must be >= 1");
  if (spectral_nodes != 0 && (spectral_nodes < 64 || spectral_nodes % 2 != 0))
    throw Error(ErrorKind::invalid_argument, "SimConfig: spectral_nodes must be even and >= 64");
  if (jitter && !(*jitter >= 0.0 && std::isfinite(*jitter)))
    throw Error(ErrorKind::invalid_argument, "SimConfig: jitter must be finite and >= 0");
}

std::size_t SimConfig::effective_nodes() const {
  if (spectral_nodes != 0) return spectral_nodes;
  std::size_t m = 4096;
  while (m < length) m *= 2;
  return m;
}

namespace {

ComplexSeries simulate_cholesky(const GvMSpectrum& spectrum, const SimConfig& cfg, std::mt19937_64& rng) {
  const double sigma2 = spectrum.params().sigma2;
  const auto n = static_cast<Eigen::Index>(cfg.length);
  const Acvf acvf = spectrum.acvf(static_cast<int>(n) - 1);
  double jitter = cfg.jitter.value_or(1e-12 * sigma2);
  const double cap = 1e-6 * sigma2;

  Eigen::MatrixXd factor;
  while (true) {
    factor = realified_covariance(acvf);
    factor.diagonal().array() += jitter;
    Eigen::LLT<Eigen::Ref<Eigen::MatrixXd>> llt(factor);
    if (llt.info() == Eigen::Success) break;
    jitter = jitter == 0.0 ? 1e-12 * sigma2 : 10.0 * jitter;
    if (jitter > cap)
      throw Error(ErrorKind::numerical,
                  "simulate: Cholesky factorization failed after jitter escalation to 1e-6 sigma2");
  }

  std::normal_distribution<double> normal;
  Eigen::VectorXd w(2 * n);
  for (Eigen::Index i = 0; i < w.size(); ++i) w(i) = normal(rng);
  const Eigen::VectorXd z = factor.triangularView<Eigen::Lower>() * w;

  ComplexSeries out;
  out.values.reserve(cfg.length);
  for (Eigen::Index t = 0; t < n; ++t) out.values.emplace_back(z(t), z(n + t));
  return out;
}

ComplexSeries simulate_spectral(const GvMSpectrum& spectrum, const SimConfig& cfg, std::mt19937_64& rng) {
  const std::size_t cells = cfg.effective_nodes();
  const double width = two_pi / static_cast<double>(cells);
  std::normal_distribution<double> normal;
  std::vector<std::complex<double>> increments(cells);
  double lower = 0.0;
  for (std::size_t m = 0; m < cells; ++m) {
    const double edge = m + 1 == cells ? pi : -pi + width * static_cast<double>(m + 1);
    const double upper = spectrum.cdf(edge);
    const double mass = std::max(0.0, upper - lower);
    lower = upper;
    const double re = normal(rng);
    const double im = normal(rng);
    increments[m] = std::sqrt(0.5 * mass) * std::complex<double>(re, im);
  }
  // X_j = sum_m exp(i theta_m j) dZ_m with theta_m = theta_0 + 2 pi m / M
  const auto sums = detail::dft(increments, +1);
  const double theta0 = -pi + 0.5 * width;
  ComplexSeries out;
  out.values.reserve(cfg.length);
  for (std::size_t j = 1; j <= cfg.length; ++j)
    out.values.push_back(std::polar(1.0, theta0 * static_cast<double>(j)) * sums[j % cells]);
  return out;
}

}  // namespace

ComplexSeries simulate(const GvMParams& p, const SimConfig& cfg) {
  cfg.validate();
  const GvMSpectrum spectrum(p);
  std::mt19937_64 rng(cfg.seed);
  if (cfg.method == SimMethod::exact_cholesky) return simulate_cholesky(spectrum, cfg, rng);
  return simulate_spectral(spectrum, cfg, rng);
}

}  // namespace gvm
