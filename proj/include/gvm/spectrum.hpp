// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The gvm-spectral Authors

#pragma once

#include <vector>

#include "gvm/acvf.hpp"
#include "gvm/special.hpp"
#include "gvm/tabulated_density.hpp"

namespace gvm {

/// Wraps an angle into (-period / 2, period / 2].
double wrap_angle(double angle, double period = two_pi);

/// Reduces an angle into [0, period).
double reduce_angle(double angle, double period);

/// GvM_k spectral model: sigma2 * exp{sum_j kappa_j cos j(theta - mu_j)} / (2 pi G_0).
///
/// mu_j lives in (-pi/j, pi/j] and kappa_j >= 0. A location whose
/// concentration is zero is unidentifiable; canonical() sets it to zero.
struct GvMParams {
  double sigma2 = 1.0;
  std::vector<double> mus;
  std::vector<double> kappas;

  int order() const { return static_cast<int>(kappas.size()); }

  /// Throws ErrorKind::invalid_argument naming the violated invariant.
  void validate() const;

  GvMParams canonical() const;

  /// delta_j = (mu_1 - mu_{j+1}) mod 2 pi / (j + 1), j = 1..k-1.
  std::vector<double> deltas() const;
  GvMShape shape() const { return {deltas(), kappas}; }

  static GvMParams uniform(double sigma2 = 1.0, int order = 1);
  static GvMParams von_mises(double mu, double kappa, double sigma2 = 1.0);

  /// Inverse of shape(): mu_{j+1} is the representative of mu_1 - delta_j in
  /// (-pi/(j+1), pi/(j+1)].
  static GvMParams from_shape(double sigma2, double mu1, const GvMShape& shape);
};

/// Location and concentration parameters of an exponential tilt; the total
/// mass comes from the tilted reference density.
struct Tilt {
  std::vector<double> mus;
  std::vector<double> kappas;

  int order() const { return static_cast<int>(kappas.size()); }
  void validate() const;
  GvMShape shape() const;

  static Tilt of(const GvMParams& p) { return {p.mus, p.kappas}; }
};

/// A GvM_k spectrum with its integral constants precomputed.
///
/// The constants are computed out to the order where |A_r| + |B_r| has decayed
/// below 1e-17 on two consecutive orders; the distribution function series and
/// the autocovariance use exactly these, treating higher orders as zero.
class GvMSpectrum {
 public:
  explicit GvMSpectrum(GvMParams params, const QuadratureSpec& spec = {});

  const GvMParams& params() const { return params_; }
  const IntegralConstants& constants() const { return constants_; }
  double log_g0() const { return constants_.log_g0(); }

  double density(double theta) const;

  /// F(theta) = integral of the density over [-pi, theta], by the
  /// term-by-term integrated Fourier series anchored at -pi.
  double cdf(double theta) const;

  /// F(theta2) - F(theta1); the mean square of the spectral-process increment.
  double increment_variance(double theta1, double theta2) const;

  /// Closed-form spectral entropy from log G_0, A_r, B_r.
  double entropy() const;

  /// psi(r) = sigma2 exp(i r mu_1) (A_r + i B_r), r = 1..max_lag.
  Acvf acvf(int max_lag) const;

  TabulatedDensity tabulate(std::size_t nodes = TabulatedDensity::default_nodes) const;

 private:
  GvMParams params_;
  IntegralConstants constants_;
  double log_norm_;  // log(sigma2 / (2 pi G_0))
};

double gvm_density(const GvMParams& p, double theta);
double gvm_cdf(const GvMParams& p, double theta);
double spectral_increment_variance(const GvMParams& p, double theta1, double theta2);
double gvm_entropy(const GvMParams& p);
Acvf gvm_acvf(const GvMParams& p, int max_lag);

/// Spectral Kullback-Leibler information I(f | g) = integral of log(f/g) f.
/// Tables with different node counts are compared on the finer grid.
/// Throws ErrorKind::invalid_argument when the masses differ by more than
/// 1e-8 relative and ErrorKind::infinite_divergence when f > 0 where g == 0.
double kl_information(const TabulatedDensity& f, const TabulatedDensity& g);

/// S(f) = -I(f | uniform of equal mass); never positive.
double spectral_entropy(const TabulatedDensity& f);

/// h(theta) exp{sum_j kappa_j cos j(theta - mu_j)} / G_0(delta, kappa; h_1),
/// on h's grid; the mass of h is preserved.
TabulatedDensity exponential_tilt(const TabulatedDensity& h, const Tilt& tilt);

/// -sigma2 log G_0(delta, kappa; h_1) + sum_r kappa_r (nu_r cos r mu_r + xi_r sin r mu_r).
/// Lower bound on I(g | h) over all g meeting the target's autocovariances,
/// attained by the tilt whose parameters solve the moment equations.
double kl_bound(const Tilt& tilt, const Acvf& target, const TabulatedDensity& h);

/// As above against the uniform reference of mass target.sigma2.
double kl_bound(const Tilt& tilt, const Acvf& target, const QuadratureSpec& spec = {});

}  // namespace gvm
