// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The gvm-spectral Authors

#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include "gvm/acvf.hpp"
#include "gvm/spectrum.hpp"
#include "gvm/tabulated_density.hpp"

namespace gvm {

/// X_1..X_n, n >= 2, all finite.
struct ComplexSeries {
  std::vector<std::complex<double>> values;

  std::size_t size() const { return values.size(); }
  void validate() const;
};

/// psi_hat(r) = n^-1 sum_{j=1}^{n-r} (X_{j+r} - M) conj(X_j - M), r = 0..max_lag.
Acvf sample_acvf(const ComplexSeries& x, int max_lag);

/// Lambda(j) = sum_{|r| < n} psi_hat(r) exp(-i 2 pi j r / L) on the symmetric
/// grid j = -floor((L-1)/2)..floor(L/2) with L = oversample * n.
///
/// With oversample = 1 this is the usual Fourier grid of the sample. The
/// n-point grid only determines the circularly folded autocovariance
/// psi_hat(r) + conj(psi_hat(n - r)); oversample >= 2 keeps every lag.
struct Periodogram {
  std::size_t sample_size = 0;
  std::vector<long> index;
  std::vector<double> frequency;
  std::vector<double> value;

  std::size_t grid_size() const { return value.size(); }
};

Periodogram periodogram(const ComplexSeries& x, int oversample = 1);

/// Inverse DFT of the periodogram, lags 0..n-1. Exact sample autocovariance
/// when the grid has at least 2n - 1 points, folded otherwise.
Acvf acvf_from_periodogram(const Periodogram& p);

enum class JacobianMode { analytic, finite_difference };

struct SolverConfig {
  double residual_tol = 1e-10;
  int max_iter = 200;
  /// Restarts per phase dimension tried when the first Newton run fails.
  int multistart_grid = 8;
  /// Forward-difference step when jacobian == finite_difference.
  double fd_step = 1e-6;
  JacobianMode jacobian = JacobianMode::analytic;

  void validate() const;

  /// Defaults, with residual_tol taken from GVM_TOL when set.
  static SolverConfig from_env();
};

struct FitReport {
  GvMParams params;
  double residual_norm = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// Euclidean norm of the 2k real moment equations
/// (nu_r, xi_r) - sigma2 R(r mu_1) (A_r, B_r), r = 1..k.
double moment_residual(const Acvf& target, const GvMParams& p, const QuadratureSpec& spec = {});

/// The same residual in the complex form psi_r - sigma2 exp(i r mu_1) (A_r + i B_r).
double moment_residual_complex(const Acvf& target, const GvMParams& p,
                               const QuadratureSpec& spec = {});

/// Residual of the tilt of a tabulated reference; sigma2 comes from the target.
double moment_residual(const Acvf& target, const Tilt& tilt, const TabulatedDensity& reference);

/// Trigonometric method of moments: the GvM_k (maximum-entropy) spectrum
/// whose first k autocovariances equal the target's.
///
/// Throws ErrorKind::infeasible when some |psi_r| >= (1 - 1e-12) sigma2 or the
/// Toeplitz check fails, ErrorKind::range when the target has fewer than k
/// lags, and ErrorKind::no_convergence when no run meets residual_tol.
FitReport solve_moments(const Acvf& target, int order, const SolverConfig& cfg = {});

/// As above for the Kullback-Leibler closest tilt of a tabulated reference;
/// the tilt parameters are returned with sigma2 = target.sigma2.
FitReport solve_moments(const Acvf& target, int order, const TabulatedDensity& reference,
                        const SolverConfig& cfg = {});

/// Closed-form von Mises fit: mu_1 = atan2(xi_1, nu_1), kappa_1 = A_1^-1(|psi_1| / sigma2).
FitReport solve_vm(const Acvf& target);

/// A_1(kappa) = I_1(kappa) / I_0(kappa).
double bessel_ratio(double kappa);

/// Inverse of bessel_ratio on [0, 1), by bracketing bisection with Newton steps.
double inverse_bessel_ratio(double ratio);

/// Burg entropy, the integral of log f. Throws ErrorKind::domain when some
/// grid value is not positive.
double burg_entropy(const TabulatedDensity& f);

}  // namespace gvm
