// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The gvm-spectral Authors

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>

#include <Eigen/Core>

#include "gvm/acvf.hpp"
#include "gvm/estimation.hpp"
#include "gvm/spectrum.hpp"

namespace gvm {

/// Radially symmetric Gaussian model of (U_1..U_n, V_1..V_n), U = Re X, V = Im X,
/// at n = max_lag + 1 consecutive times.
///
/// Blocks: E[U_l U_m] = E[V_l V_m] = nu(l - m) / 2,
///         E[U_l V_m] = -xi(l - m) / 2, E[V_l U_m] = xi(l - m) / 2.
struct GaussianModel {
  Acvf acvf;
  Eigen::MatrixXd sigma;

  int times() const { return acvf.max_lag() + 1; }
};

/// The 2n x 2n block covariance above, without any definiteness check.
Eigen::MatrixXd realified_covariance(const Acvf& acvf);

/// Throws ErrorKind::invalid_argument when the autocovariance fails its
/// invariants or the covariance has an eigenvalue below -1e-10 sigma2.
GaussianModel build_sigma(const Acvf& acvf);

/// {1 + log 2 pi} n + log det(sigma) / 2 with n = k + 1 times.
/// Throws ErrorKind::degenerate when sigma is singular.
double temporal_entropy(const GaussianModel& model);

enum class SimMethod { exact_cholesky, spectral };

struct SimConfig {
  std::size_t length = 1;
  std::uint64_t seed = 0;
  SimMethod method = SimMethod::spectral;
  /// Spectral cells M; 0 selects max(4096, smallest power of two >= length).
  /// The spectral path is periodic with period M, so M should not be below the length.
  std::size_t spectral_nodes = 0;
  /// Initial diagonal jitter for the Cholesky factor; defaults to 1e-12 sigma2.
  std::optional<double> jitter;

  void validate() const;
  std::size_t effective_nodes() const;
};

/// Zero-mean, radially symmetric Gaussian path X_1..X_n whose spectrum is the GvM_k model.
///
/// exact_cholesky factors the 2n x 2n block covariance (cost O(n^3), memory
/// 32 n^2 bytes; meant for n up to a few thousand). Jitter is escalated
/// tenfold up to 1e-6 sigma2 before ErrorKind::numerical is thrown.
///
/// spectral sums M independent complex Gaussian increments at cell midpoints,
/// each with variance equal to the spectral mass of its cell.
ComplexSeries simulate(const GvMParams& p, const SimConfig& cfg);

}  // namespace gvm
