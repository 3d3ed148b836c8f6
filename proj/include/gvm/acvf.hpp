// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The gvm-spectral Authors

#pragma once

#include <complex>
#include <vector>

#include <Eigen/Core>

namespace gvm {

/// A finite stretch psi(0..K) of a Hermitian autocovariance function.
/// psi(0) = sigma2 is real; values[r - 1] holds psi(r) = nu_r + i xi_r.
struct Acvf {
  double sigma2 = 1.0;
  std::vector<std::complex<double>> values;

  int max_lag() const { return static_cast<int>(values.size()); }

  /// psi(r) for any |r| <= max_lag, using psi(-r) = conj(psi(r)).
  std::complex<double> operator()(int r) const;
  double nu(int r) const { return (*this)(r).real(); }
  double xi(int r) const { return (*this)(r).imag(); }

  /// The (K+1) x (K+1) Hermitian Toeplitz matrix with (l, m) entry psi(m - l),
  /// i.e. sigma2 on the diagonal and psi_1..psi_K along the first row.
  Eigen::MatrixXcd toeplitz() const;
  double min_toeplitz_eigenvalue() const;

  /// Throws ErrorKind::invalid_argument unless sigma2 > 0, every value is
  /// finite with |psi_r| <= sigma2, and the Toeplitz matrix has minimum
  /// eigenvalue >= -1e-10 sigma2.
  void validate() const;

  static Acvf white_noise(double sigma2, int max_lag);
};

}  // namespace gvm
