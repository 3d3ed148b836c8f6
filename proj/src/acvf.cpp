// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The gvm-spectral Authors

#include "gvm/acvf.hpp"

#include <cmath>
#include <cstdlib>
#include <string>

#include <Eigen/Eigenvalues>

#include "gvm/error.hpp"

namespace gvm {

std::complex<double> Acvf::operator()(int r) const {
  const int lag = std::abs(r);
  if (lag > max_lag())
    throw Error(ErrorKind::range, "Acvf: lag " + std::to_string(r) + " beyond max lag " +
                                      std::to_string(max_lag()));
  if (lag == 0) return {sigma2, 0.0};
  const auto v = values[static_cast<std::size_t>(lag) - 1];
  return r > 0 ? v : std::conj(v);
}

Eigen::MatrixXcd Acvf::toeplitz() const {
  const int n = max_lag() + 1;
  Eigen::MatrixXcd m(n, n);
  for (int l = 0; l < n; ++l)
    for (int c = 0; c < n; ++c) m(l, c) = (*this)(c - l);
  return m;
}

double Acvf::min_toeplitz_eigenvalue() const {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(toeplitz(), Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

void Acvf::validate() const {
  if (!std::isfinite(sigma2) || sigma2 <= 0.0)
    throw Error(ErrorKind::invalid_argument, "Acvf: psi(0) = sigma2 must be finite and > 0");
  for (std::size_t r = 0; r < values.size(); ++r) {
    const auto v = values[r];
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
      throw Error(ErrorKind::invalid_argument, "Acvf: psi(" + std::to_string(r + 1) + ") is not finite");
    if (std::abs(v) > sigma2 * (1.0 + 1e-12))
      throw Error(ErrorKind::invalid_argument,
                  "Acvf: |psi(" + std::to_string(r + 1) + ")| exceeds sigma2");
  }
  if (!values.empty()) {
    const double lo = min_toeplitz_eigenvalue();
    if (lo < -1e-10 * sigma2)
      throw Error(ErrorKind::invalid_argument,
                  "Acvf: Toeplitz matrix is not nonnegative definite (min eigenvalue " +
                      std::to_string(lo) + ")");
  }
}

Acvf Acvf::white_noise(double sigma2, int max_lag) {
  return {sigma2, std::vector<std::complex<double>>(static_cast<std::size_t>(max_lag), 0.0)};
}

}  // namespace gvm
