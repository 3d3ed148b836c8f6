// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The gvm-spectral Authors

#include "gvm/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "gvm/error.hpp"

namespace gvm {

namespace {

// A_r, B_r below this on two consecutive orders end the harmonic expansion.
constexpr double harmonic_cutoff = 1e-17;
constexpr int max_harmonics = 1 << 14;

void validate_locations(const std::vector<double>& mus, const std::vector<double>& kappas,
                        const char* what) {
  if (kappas.empty()) throw Error(ErrorKind::invalid_argument, std::string(what) + ": order k must be >= 1");
  if (mus.size() != kappas.size())
    throw Error(ErrorKind::invalid_argument,
                std::string(what) + ": mus and kappas must both have length k");
  for (std::size_t j = 0; j < mus.size(); ++j) {
    const double order = static_cast<double>(j + 1);
    const double half = pi / order;
    if (!std::isfinite(mus[j]) || !(mus[j] > -half && mus[j] <= half))
      throw Error(ErrorKind::invalid_argument, std::string(what) + ": mu_" + std::to_string(j + 1) +
                                                   " must lie in (-pi/" + std::to_string(j + 1) +
                                                   ", pi/" + std::to_string(j + 1) + "]");
    if (!std::isfinite(kappas[j]) || kappas[j] < 0.0)
      throw Error(ErrorKind::invalid_argument,
                  std::string(what) + ": kappa_" + std::to_string(j + 1) + " must be finite and >= 0");
  }
}

double tilt_exponent(const std::vector<double>& mus, const std::vector<double>& kappas, double theta) {
  double e = 0.0;
  for (std::size_t j = 0; j < kappas.size(); ++j) {
    const double order = static_cast<double>(j + 1);
    e += kappas[j] * std::cos(order * (theta - mus[j]));
  }
  return e;
}

IntegralConstants converged_constants(const GvMShape& shape, const QuadratureSpec& spec) {
  int r_max = std::max(32, shape.order());
  while (true) {
    auto c = integral_constants(shape, r_max, spec);
    int small_run = 0;
    for (int r = 1; r <= r_max; ++r) {
      const double size = std::abs(c.a(r)) + std::abs(c.b(r));
      small_run = size < harmonic_cutoff ? small_run + 1 : 0;
      if (small_run == 2 && r >= shape.order()) {
        c.g.resize(static_cast<std::size_t>(r) + 1);
        c.h.resize(static_cast<std::size_t>(r) + 1);
        return c;
      }
    }
    if (r_max >= max_harmonics) return c;
    r_max *= 2;
  }
}

double linear_term(const Acvf& target, const std::vector<double>& mus, const std::vector<double>& kappas) {
  double s = 0.0;
  for (std::size_t j = 0; j < kappas.size(); ++j) {
    const int r = static_cast<int>(j + 1);
    s += kappas[j] * (target.nu(r) * std::cos(r * mus[j]) + target.xi(r) * std::sin(r * mus[j]));
  }
  return s;
}

void check_target(const Acvf& target, int order) {
  target.validate();
  if (target.max_lag() < order)
    throw Error(ErrorKind::range, "kl_bound: target needs at least k autocovariance lags");
}

}  // namespace

double wrap_angle(double angle, double period) {
  double r = angle - period * std::ceil((angle - 0.5 * period) / period);
  if (r <= -0.5 * period) r += period;
  if (r > 0.5 * period) r -= period;
  return r;
}

double reduce_angle(double angle, double period) {
  double r = std::fmod(angle, period);
  if (r < 0.0) r += period;
  if (r >= period) r = 0.0;
  return r;
}

void GvMParams::validate() const {
  if (!std::isfinite(sigma2) || sigma2 <= 0.0)
    throw Error(ErrorKind::invalid_argument, "GvMParams: sigma2 must be finite and > 0");
  validate_locations(mus, kappas, "GvMParams");
}

GvMParams GvMParams::canonical() const {
  GvMParams out = *this;
  for (std::size_t j = 0; j < out.kappas.size(); ++j) {
    if (out.kappas[j] == 0.0) out.mus[j] = 0.0;
    else out.mus[j] = wrap_angle(out.mus[j], two_pi / static_cast<double>(j + 1));
  }
  return out;
}

std::vector<double> GvMParams::deltas() const {
  std::vector<double> out;
  for (std::size_t j = 1; j < mus.size(); ++j)
    out.push_back(reduce_angle(mus[0] - mus[j], two_pi / static_cast<double>(j + 1)));
  return out;
}

GvMParams GvMParams::uniform(double sigma2, int order) {
  return {sigma2, std::vector<double>(static_cast<std::size_t>(order), 0.0),
          std::vector<double>(static_cast<std::size_t>(order), 0.0)};
}

GvMParams GvMParams::von_mises(double mu, double kappa, double sigma2) {
  return {sigma2, {mu}, {kappa}};
}

GvMParams GvMParams::from_shape(double sigma2, double mu1, const GvMShape& shape) {
  shape.validate();
  GvMParams p{sigma2, {wrap_angle(mu1)}, shape.kappas};
  for (std::size_t j = 0; j < shape.deltas.size(); ++j)
    p.mus.push_back(wrap_angle(p.mus[0] - shape.deltas[j], two_pi / static_cast<double>(j + 2)));
  return p;
}

void Tilt::validate() const { validate_locations(mus, kappas, "Tilt"); }

GvMShape Tilt::shape() const { return GvMParams{1.0, mus, kappas}.shape(); }

GvMSpectrum::GvMSpectrum(GvMParams params, const QuadratureSpec& spec) : params_(std::move(params)) {
  params_.validate();
  constants_ = converged_constants(params_.shape(), spec);
  log_norm_ = std::log(params_.sigma2) - std::log(two_pi) - constants_.log_g0();
}

double GvMSpectrum::density(double theta) const {
  return std::exp(log_norm_ + tilt_exponent(params_.mus, params_.kappas, theta));
}

double GvMSpectrum::cdf(double theta) const {
  if (!(theta >= -pi && theta <= pi))
    throw Error(ErrorKind::invalid_argument, "gvm_cdf: theta must lie in [-pi, pi]");
  if (theta == -pi) return 0.0;
  if (theta == pi) return params_.sigma2;
  const double mu1 = params_.mus[0];
  double sum = theta + pi;
  for (int r = constants_.max_order(); r >= 1; --r) {
    const double a = constants_.a(r);
    const double b = constants_.b(r);
    if (a == 0.0 && b == 0.0) continue;
    const double upper = r * (theta - mu1);
    const double lower = r * (-pi - mu1);
    sum += 2.0 / r *
           (a * (std::sin(upper) - std::sin(lower)) - b * (std::cos(upper) - std::cos(lower)));
  }
  return std::clamp(params_.sigma2 / two_pi * sum, 0.0, params_.sigma2);
}

double GvMSpectrum::increment_variance(double theta1, double theta2) const {
  if (!(theta1 >= -pi && theta2 <= pi && theta1 < theta2))
    throw Error(ErrorKind::invalid_argument,
                "spectral_increment_variance: need -pi <= theta1 < theta2 <= pi");
  return std::max(0.0, cdf(theta2) - cdf(theta1));
}

double GvMSpectrum::entropy() const {
  const auto& c = constants_;
  const auto deltas = params_.deltas();
  double bracket = c.log_g0() - params_.kappas[0] * c.a(1);
  for (int r = 2; r <= params_.order(); ++r) {
    const double d = deltas[static_cast<std::size_t>(r) - 2];
    bracket -= params_.kappas[static_cast<std::size_t>(r) - 1] *
               (c.a(r) * std::cos(r * d) - c.b(r) * std::sin(r * d));
  }
  return params_.sigma2 * bracket;
}

Acvf GvMSpectrum::acvf(int max_lag) const {
  if (max_lag < 0) throw Error(ErrorKind::range, "gvm_acvf: max_lag must be >= 0");
  Acvf out{params_.sigma2, std::vector<std::complex<double>>(static_cast<std::size_t>(max_lag))};
  const int known = std::min(max_lag, constants_.max_order());
  for (int r = 1; r <= known; ++r) {
    const std::complex<double> rotation = std::polar(1.0, r * params_.mus[0]);
    out.values[static_cast<std::size_t>(r) - 1] =
        params_.sigma2 * rotation * std::complex<double>(constants_.a(r), constants_.b(r));
  }
  return out;
}

TabulatedDensity GvMSpectrum::tabulate(std::size_t nodes) const {
  return TabulatedDensity::from_function([this](double t) { return density(t); }, nodes);
}

double gvm_density(const GvMParams& p, double theta) { return GvMSpectrum(p).density(theta); }

double gvm_cdf(const GvMParams& p, double theta) { return GvMSpectrum(p).cdf(theta); }

double spectral_increment_variance(const GvMParams& p, double theta1, double theta2) {
  return GvMSpectrum(p).increment_variance(theta1, theta2);
}

double gvm_entropy(const GvMParams& p) { return GvMSpectrum(p).entropy(); }

Acvf gvm_acvf(const GvMParams& p, int max_lag) { return GvMSpectrum(p).acvf(max_lag); }

namespace {

// f log(f/g) - f + g, which is nonnegative termwise; a series near f = g
// avoids the cancellation that would otherwise leave its sign to round-off.
double gibbs_term(double f, double g) {
  if (f == 0.0) return g;
  const double t = (f - g) / g;
  if (std::abs(t) < 1e-3) return g * t * t * (0.5 - t * (1.0 / 6.0 - t * (1.0 / 12.0 - t / 20.0)));
  return std::max(0.0, f * std::log(f / g) - f + g);
}

}  // namespace

double kl_information(const TabulatedDensity& f, const TabulatedDensity& g) {
  if (std::abs(f.mass() - g.mass()) > 1e-8 * std::max(f.mass(), g.mass()))
    throw Error(ErrorKind::invalid_argument, "kl_information: densities must have equal mass");
  if (f.size() != g.size()) {
    const std::size_t nodes = std::max(f.size(), g.size());
    return kl_information(f.resampled(nodes), g.resampled(nodes));
  }
  const auto fv = f.values();
  const auto gv = g.values();
  double sum = 0.0;
  double imbalance = 0.0;
  for (std::size_t i = 0; i < fv.size(); ++i) {
    if (fv[i] > 0.0 && gv[i] == 0.0)
      throw Error(ErrorKind::infinite_divergence,
                  "kl_information: f is positive where g vanishes (infinite divergence)");
    if (gv[i] == 0.0) continue;
    sum += gibbs_term(fv[i], gv[i]);
    imbalance += fv[i] - gv[i];
  }
  return (sum + imbalance) * f.step();
}

double spectral_entropy(const TabulatedDensity& f) {
  // against the uniform level of the table's own integral, so the grid sums
  // of f and of the reference agree and every Gibbs term is nonnegative
  const double level = f.integral() / two_pi;
  double sum = 0.0;
  for (double v : f.values()) sum += gibbs_term(v, level);
  return -sum * f.step();
}

TabulatedDensity exponential_tilt(const TabulatedDensity& h, const Tilt& tilt) {
  tilt.validate();
  const double shift = tilt.shape().kappa_sum();
  std::vector<double> values(h.size());
  const auto hv = h.values();
  double norm = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    values[i] = hv[i] * std::exp(tilt_exponent(tilt.mus, tilt.kappas, h.theta(i)) - shift);
    norm += values[i];
  }
  if (!(norm > 0.0)) throw Error(ErrorKind::invalid_argument, "exponential_tilt: reference has no mass");
  // norm * step / mass is the scaled G_0(delta, kappa; h_1)
  const double scale = h.mass() / (norm * h.step());
  for (auto& v : values) v *= scale;
  return TabulatedDensity(std::move(values), h.mass());
}

double kl_bound(const Tilt& tilt, const Acvf& target, const TabulatedDensity& h) {
  tilt.validate();
  check_target(target, tilt.order());
  if (std::abs(h.mass() - target.sigma2) > 1e-8 * target.sigma2)
    throw Error(ErrorKind::invalid_argument, "kl_bound: reference mass must equal target sigma2");
  const auto c = integral_constants(tilt.shape(), 0, h, tilt.mus[0]);
  return -target.sigma2 * c.log_g0() + linear_term(target, tilt.mus, tilt.kappas);
}

double kl_bound(const Tilt& tilt, const Acvf& target, const QuadratureSpec& spec) {
  tilt.validate();
  check_target(target, tilt.order());
  const auto c = integral_constants(tilt.shape(), 0, spec);
  return -target.sigma2 * c.log_g0() + linear_term(target, tilt.mus, tilt.kappas);
}

}  // namespace gvm
