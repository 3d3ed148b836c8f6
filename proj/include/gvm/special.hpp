// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The gvm-spectral Authors

#pragma once

#include <functional>
#include <numbers>
#include <utility>
#include <vector>

namespace gvm {

inline constexpr double pi = std::numbers::pi;
inline constexpr double two_pi = 2.0 * std::numbers::pi;

class TabulatedDensity;

/// Equispaced trapezoid rule on (-pi, pi] with successive refinement.
struct QuadratureSpec {
  int num_nodes = 64;
  int refinement_factor = 2;
  double abs_tol = 1e-12;

  /// Refinement stops with a quadrature failure once this many nodes would be exceeded.
  static constexpr long max_nodes = 1L << 20;

  void validate() const;

  /// Defaults, with abs_tol taken from the GVM_TOL environment variable when set.
  static QuadratureSpec from_env();
};

/// Shape arguments of the integral constants: reduced phase shifts
/// delta_j in [0, 2 pi / (j + 1)) for j = 1..k-1 and concentrations kappa_j >= 0.
struct GvMShape {
  std::vector<double> deltas;
  std::vector<double> kappas;

  int order() const { return static_cast<int>(kappas.size()); }
  double kappa_sum() const;
  void validate() const;

  static GvMShape von_mises(double kappa) { return {{}, {kappa}}; }
};

/// Modified Bessel function of the first kind, integer order n >= 0, real z >= 0.
/// Throws ErrorKind::overflow for z > bessel_overflow_limit.
double bessel_i(int n, double z);

/// exp(-z) I_n(z); finite for every z >= 0.
double bessel_i_scaled(int n, double z);

/// exp(-z) I_n(z) for n = 0..n_max in one pass.
std::vector<double> bessel_i_scaled_sequence(int n_max, double z);

inline constexpr double bessel_overflow_limit = 650.0;

/// Integral of a smooth 2 pi-periodic f over (-pi, pi].
///
/// The trapezoid sum is refined by spec.refinement_factor until two successive
/// estimates differ by less than spec.abs_tol. Differences at the round-off
/// floor of the sum (a few ulps of the integral of |f|) are accepted as
/// converged as well, so large integrands do not spin until the node cap.
double quad_periodic(const std::function<double(double)>& f, const QuadratureSpec& spec = {});

/// The cosine and sine constants G_r, H_r for r = 0..r_max of one shape, stored
/// with a common scale factor exp(log_scale) so that large concentrations do not
/// overflow. h[0] is always zero.
struct IntegralConstants {
  double log_scale = 0.0;
  std::vector<double> g;
  std::vector<double> h;

  int max_order() const { return static_cast<int>(g.size()) - 1; }
  double log_g0() const;
  double g_unscaled(int r) const;
  double h_unscaled(int r) const;
  double a(int r) const { return g.at(r) / g.front(); }
  double b(int r) const { return h.at(r) / g.front(); }
};

/// G_0..G_r_max, H_0..H_r_max against the circular uniform density. Uses the
/// Bessel product series for order <= 2 and periodic quadrature otherwise.
IntegralConstants integral_constants(const GvMShape& shape, int r_max,
                                     const QuadratureSpec& spec = {});

/// Order <= 2 only.
IntegralConstants integral_constants_series(const GvMShape& shape, int r_max,
                                            const QuadratureSpec& spec = {});

IntegralConstants integral_constants_quadrature(const GvMShape& shape, int r_max,
                                                const QuadratureSpec& spec = {});

/// Constants against a tabulated reference density. The reference is taken in
/// the original frequency coordinate, so the frame offset mu1 (the first
/// location angle) is needed to align it with the shifted exponent.
IntegralConstants integral_constants(const GvMShape& shape, int r_max,
                                     const TabulatedDensity& reference, double mu1);

double g_const(int r, const GvMShape& shape, const QuadratureSpec& spec = {});
double h_const(int r, const GvMShape& shape, const QuadratureSpec& spec = {});
double g_const(int r, const GvMShape& shape, const TabulatedDensity& reference, double mu1);
double h_const(int r, const GvMShape& shape, const TabulatedDensity& reference, double mu1);

/// (A_r, B_r) = (G_r / G_0, H_r / G_0).
std::pair<double, double> ab_ratios(int r, const GvMShape& shape,
                                    const QuadratureSpec& spec = {});
std::pair<double, double> ab_ratios(int r, const GvMShape& shape,
                                    const TabulatedDensity& reference, double mu1);

}  // namespace gvm
