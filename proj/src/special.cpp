// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The gvm-spectral Authors

#include "gvm/special.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdlib>
#include <limits>
#include <string>

#include "gvm/error.hpp"
#include "gvm/tabulated_density.hpp"

namespace gvm {

namespace {

constexpr double eps = std::numeric_limits<double>::epsilon();

// Above this argument the power series loses to the backward recurrence.
constexpr double series_limit = 15.0;

void check_bessel_args(int n, double z) {
  if (n < 0) throw Error(ErrorKind::invalid_argument, "bessel_i: order must be >= 0");
  if (!std::isfinite(z) || z < 0.0)
    throw Error(ErrorKind::invalid_argument, "bessel_i: argument must be finite and >= 0");
}

// sum_m (z/2)^(2m+n) / (m! (m+n)!), all terms positive.
double bessel_series(int n, double z) {
  const double half = 0.5 * z;
  double term = 1.0;
  for (int i = 1; i <= n; ++i) {
    term *= half / i;
    if (term == 0.0) return 0.0;
  }
  const double q = half * half;
  double sum = term;
  for (int m = 1; m < 1000; ++m) {
    term *= q / (static_cast<double>(m) * (m + n));
    sum += term;
    if (term < 0.1 * eps * sum) break;
  }
  return sum;
}

// Miller backward recurrence I_{k-1} = (2k/z) I_k + I_{k+1}, normalized with
// I_0 + 2 sum_{k>=1} I_k = exp(z). Returns exp(-z) I_n for n = 0..n_max.
std::vector<double> bessel_miller_scaled(int n_max, double z) {
  const int start = n_max + static_cast<int>(std::ceil(std::sqrt(100.0 * z))) + 30;
  constexpr double big = 1e250;
  std::vector<double> out(static_cast<std::size_t>(n_max) + 1, 0.0);
  double next = 0.0;  // I_{k+1}
  double cur = 1e-300;  // I_k
  double norm = 0.0;
  for (int k = start; k >= 1; --k) {
    if (k <= n_max) out[k] = cur;
    norm += 2.0 * cur;
    const double prev = (2.0 * k / z) * cur + next;
    next = cur;
    cur = prev;
    if (cur > big) {
      cur /= big;
      next /= big;
      norm /= big;
      for (int i = k; i <= n_max; ++i) out[i] /= big;
    }
  }
  out[0] = cur;
  norm += cur;
  for (auto& v : out) v /= norm;
  return out;
}

}  // namespace

void QuadratureSpec::validate() const {
  if (num_nodes < 16) throw Error(ErrorKind::invalid_argument, "QuadratureSpec: num_nodes must be >= 16");
  if (refinement_factor < 2)
    throw Error(ErrorKind::invalid_argument, "QuadratureSpec: refinement_factor must be >= 2");
  if (!(abs_tol >= 100.0 * eps))
    throw Error(ErrorKind::invalid_argument, "QuadratureSpec: abs_tol must be >= 100 machine epsilon");
}

QuadratureSpec QuadratureSpec::from_env() {
  QuadratureSpec spec;
  if (const char* tol = std::getenv("GVM_TOL")) {
    char* end = nullptr;
    const double v = std::strtod(tol, &end);
    if (end == tol || *end != '\0')
      throw Error(ErrorKind::invalid_argument, std::string("GVM_TOL is not a number: ") + tol);
    spec.abs_tol = v;
  }
  spec.validate();
  return spec;
}

double GvMShape::kappa_sum() const {
  double s = 0.0;
  for (double k : kappas) s += k;
  return s;
}

void GvMShape::validate() const {
  if (kappas.empty()) throw Error(ErrorKind::invalid_argument, "GvMShape: order must be >= 1");
  if (deltas.size() + 1 != kappas.size())
    throw Error(ErrorKind::invalid_argument, "GvMShape: need exactly k - 1 phase shifts");
  for (std::size_t j = 0; j < kappas.size(); ++j) {
    if (!std::isfinite(kappas[j]) || kappas[j] < 0.0)
      throw Error(ErrorKind::invalid_argument,
                  "GvMShape: kappa_" + std::to_string(j + 1) + " must be finite and >= 0");
  }
  for (std::size_t j = 0; j < deltas.size(); ++j) {
    const double period = two_pi / static_cast<double>(j + 2);
    if (!(deltas[j] >= 0.0 && deltas[j] < period))
      throw Error(ErrorKind::invalid_argument,
                  "GvMShape: delta_" + std::to_string(j + 1) + " must lie in [0, 2 pi / " +
                      std::to_string(j + 2) + ")");
  }
}

double bessel_i_scaled(int n, double z) {
  check_bessel_args(n, z);
  if (z == 0.0) return n == 0 ? 1.0 : 0.0;
  if (z <= series_limit) return std::exp(-z) * bessel_series(n, z);
  return bessel_miller_scaled(n, z)[n];
}

double bessel_i(int n, double z) {
  check_bessel_args(n, z);
  if (z > bessel_overflow_limit)
    throw Error(ErrorKind::overflow, "bessel_i: argument " + std::to_string(z) +
                                         " exceeds the exponential range limit");
  if (z <= series_limit) return z == 0.0 ? (n == 0 ? 1.0 : 0.0) : bessel_series(n, z);
  return std::exp(z) * bessel_miller_scaled(n, z)[n];
}

std::vector<double> bessel_i_scaled_sequence(int n_max, double z) {
  check_bessel_args(n_max, z);
  std::vector<double> out(static_cast<std::size_t>(n_max) + 1, 0.0);
  if (z == 0.0) {
    out[0] = 1.0;
    return out;
  }
  if (z > series_limit) return bessel_miller_scaled(n_max, z);
  const double scale = std::exp(-z);
  for (int n = 0; n <= n_max; ++n) {
    out[n] = scale * bessel_series(n, z);
    if (out[n] == 0.0) break;
  }
  return out;
}

double quad_periodic(const std::function<double(double)>& f, const QuadratureSpec& spec) {
  spec.validate();
  long nodes = spec.num_nodes;
  double sum = 0.0;
  double abs_sum = 0.0;
  for (long i = 0; i < nodes; ++i) {
    const double v = f(-pi + two_pi * static_cast<double>(i + 1) / static_cast<double>(nodes));
    sum += v;
    abs_sum += std::abs(v);
  }
  double estimate = two_pi / static_cast<double>(nodes) * sum;
  while (true) {
    const long refined = nodes * spec.refinement_factor;
    if (refined > QuadratureSpec::max_nodes)
      throw Error(ErrorKind::quadrature_failure,
                  "quad_periodic: no convergence within " + std::to_string(QuadratureSpec::max_nodes) +
                      " nodes");
    for (long i = 0; i < refined; ++i) {
      if ((i + 1) % spec.refinement_factor == 0) continue;
      const double v = f(-pi + two_pi * static_cast<double>(i + 1) / static_cast<double>(refined));
      sum += v;
      abs_sum += std::abs(v);
    }
    nodes = refined;
    const double step = two_pi / static_cast<double>(nodes);
    const double next = step * sum;
    const double floor = 64.0 * eps * step * abs_sum;
    const double diff = std::abs(next - estimate);
    estimate = next;
    if (diff < spec.abs_tol || diff <= floor) return estimate;
  }
}

double IntegralConstants::log_g0() const { return log_scale + std::log(g.front()); }

double IntegralConstants::g_unscaled(int r) const { return g.at(r) * std::exp(log_scale); }

double IntegralConstants::h_unscaled(int r) const { return h.at(r) * std::exp(log_scale); }

namespace {

void check_order(int r_max) {
  if (r_max < 0) throw Error(ErrorKind::invalid_argument, "integral constants: r must be >= 0");
}

// Exponent kappa_1 cos t + sum_{j>=2} kappa_j cos j(t + delta_{j-1}), shifted
// by -sum kappa so that it never exceeds zero.
struct ShiftedExponent {
  const GvMShape& shape;
  double shift;

  double operator()(double t) const {
    double e = shape.kappas[0] * std::cos(t);
    for (std::size_t j = 1; j < shape.kappas.size(); ++j) {
      const double order = static_cast<double>(j + 1);
      e += shape.kappas[j] * std::cos(order * (t + shape.deltas[j - 1]));
    }
    return e - shift;
  }
};

// Accumulates w cos(r t), w sin(r t) for r = 0..r_max into g, h.
void accumulate_harmonics(double t, double w, std::vector<double>& g, std::vector<double>& h,
                          std::vector<double>* abs_g = nullptr) {
  const std::complex<double> step(std::cos(t), std::sin(t));
  std::complex<double> z(1.0, 0.0);
  for (std::size_t r = 0; r < g.size(); ++r) {
    if (r > 0 && r % 16 == 0) {
      z = std::polar(1.0, static_cast<double>(r) * t);
    }
    g[r] += w * z.real();
    h[r] += w * z.imag();
    if (abs_g) (*abs_g)[r] += w;
    z *= step;
  }
}

}  // namespace

IntegralConstants integral_constants_series(const GvMShape& shape, int r_max,
                                            const QuadratureSpec& spec) {
  shape.validate();
  check_order(r_max);
  if (shape.order() > 2)
    throw Error(ErrorKind::invalid_argument, "integral_constants_series: order must be <= 2");
  IntegralConstants out;
  out.g.assign(static_cast<std::size_t>(r_max) + 1, 0.0);
  out.h.assign(static_cast<std::size_t>(r_max) + 1, 0.0);
  const double k1 = shape.kappas[0];
  if (shape.order() == 1) {
    out.log_scale = k1;
    out.g = bessel_i_scaled_sequence(r_max, k1);
    return out;
  }
  const double k2 = shape.kappas[1];
  const double delta = shape.deltas[0];
  out.log_scale = k1 + k2;

  const int j_cap = r_max / 2 + static_cast<int>(std::ceil(std::sqrt(100.0 * k2))) + 40;
  const auto s1 = bessel_i_scaled_sequence(2 * j_cap + r_max, k1);
  const auto s2 = bessel_i_scaled_sequence(j_cap, k2);
  const double tol = std::min(spec.abs_tol / 10.0 * std::exp(-(k1 + k2)), 1e-17 * s1[0] * s2[0]);

  for (int r = 0; r <= r_max; ++r) {
    const bool even_positive = r > 0 && r % 2 == 0;
    double g = s2[0] * s1[r];
    double h = 0.0;
    if (even_positive) {
      g += s1[0] * s2[r / 2] * std::cos(r * delta);
      h -= s1[0] * s2[r / 2] * std::sin(r * delta);
    }
    int small_run = 0;
    for (int j = 1; j <= j_cap; ++j) {
      const double upper = s1[2 * j + r];
      // the j = r/2 lower term is the even_positive term above
      const double lower = (2 * j == r) ? 0.0 : s1[std::abs(2 * j - r)];
      const double c = std::cos(2.0 * j * delta);
      const double s = std::sin(2.0 * j * delta);
      g += c * s2[j] * (upper + lower);
      h += s * s2[j] * (upper - lower);
      const double magnitude = s2[j] * (upper + s1[std::abs(2 * j - r)]);
      small_run = (2 * j > r && magnitude < tol) ? small_run + 1 : 0;
      if (small_run == 2) break;
    }
    out.g[r] = g;
    out.h[r] = h;
  }
  return out;
}

IntegralConstants integral_constants_quadrature(const GvMShape& shape, int r_max,
                                                const QuadratureSpec& spec) {
  shape.validate();
  spec.validate();
  check_order(r_max);
  const std::size_t count = static_cast<std::size_t>(r_max) + 1;
  const double shift = shape.kappa_sum();
  const ShiftedExponent exponent{shape, shift};
  const double tol = spec.abs_tol * std::exp(-shift);

  std::vector<double> g(count, 0.0), h(count, 0.0), abs_g(count, 0.0);
  auto sweep = [&](long nodes, bool skip_existing) {
    for (long i = 0; i < nodes; ++i) {
      if (skip_existing && (i + 1) % spec.refinement_factor == 0) continue;
      const double t = -pi + two_pi * static_cast<double>(i + 1) / static_cast<double>(nodes);
      accumulate_harmonics(t, std::exp(exponent(t)), g, h, &abs_g);
    }
  };

  long nodes = spec.num_nodes;
  sweep(nodes, false);
  // integrand carries the uniform density 1 / (2 pi); step / (2 pi) = 1 / nodes
  std::vector<double> g_est(count), h_est(count);
  for (std::size_t r = 0; r < count; ++r) {
    g_est[r] = g[r] / static_cast<double>(nodes);
    h_est[r] = h[r] / static_cast<double>(nodes);
  }
  while (true) {
    const long refined = nodes * spec.refinement_factor;
    if (refined > QuadratureSpec::max_nodes)
      throw Error(ErrorKind::quadrature_failure, "integral constants: quadrature did not converge");
    sweep(refined, true);
    nodes = refined;
    bool done = true;
    for (std::size_t r = 0; r < count; ++r) {
      const double gn = g[r] / static_cast<double>(nodes);
      const double hn = h[r] / static_cast<double>(nodes);
      const double floor = 64.0 * eps * abs_g[r] / static_cast<double>(nodes);
      const double diff = std::max(std::abs(gn - g_est[r]), std::abs(hn - h_est[r]));
      if (!(diff < tol || diff <= floor)) done = false;
      g_est[r] = gn;
      h_est[r] = hn;
    }
    if (done) break;
  }
  h_est[0] = 0.0;
  return {shift, std::move(g_est), std::move(h_est)};
}

IntegralConstants integral_constants(const GvMShape& shape, int r_max, const QuadratureSpec& spec) {
  shape.validate();
  if (shape.order() <= 2) return integral_constants_series(shape, r_max, spec);
  return integral_constants_quadrature(shape, r_max, spec);
}

IntegralConstants integral_constants(const GvMShape& shape, int r_max,
                                     const TabulatedDensity& reference, double mu1) {
  shape.validate();
  check_order(r_max);
  if (!std::isfinite(mu1)) throw Error(ErrorKind::invalid_argument, "integral constants: mu1 must be finite");
  const std::size_t count = static_cast<std::size_t>(r_max) + 1;
  const double shift = shape.kappa_sum();
  const ShiftedExponent exponent{shape, shift};
  std::vector<double> g(count, 0.0), h(count, 0.0);
  const auto values = reference.values();
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (values[i] == 0.0) continue;
    const double t = reference.theta(i) - mu1;
    accumulate_harmonics(t, std::exp(exponent(t)) * values[i], g, h);
  }
  const double weight = reference.step() / reference.mass();
  for (std::size_t r = 0; r < count; ++r) {
    g[r] *= weight;
    h[r] *= weight;
  }
  h[0] = 0.0;
  return {shift, std::move(g), std::move(h)};
}

double g_const(int r, const GvMShape& shape, const QuadratureSpec& spec) {
  return integral_constants(shape, r, spec).g_unscaled(r);
}

double h_const(int r, const GvMShape& shape, const QuadratureSpec& spec) {
  if (r < 1) throw Error(ErrorKind::invalid_argument, "h_const: r must be >= 1");
  return integral_constants(shape, r, spec).h_unscaled(r);
}

double g_const(int r, const GvMShape& shape, const TabulatedDensity& reference, double mu1) {
  return integral_constants(shape, r, reference, mu1).g_unscaled(r);
}

double h_const(int r, const GvMShape& shape, const TabulatedDensity& reference, double mu1) {
  if (r < 1) throw Error(ErrorKind::invalid_argument, "h_const: r must be >= 1");
  return integral_constants(shape, r, reference, mu1).h_unscaled(r);
}

std::pair<double, double> ab_ratios(int r, const GvMShape& shape, const QuadratureSpec& spec) {
  if (r < 1) throw Error(ErrorKind::invalid_argument, "ab_ratios: r must be >= 1");
  const auto c = integral_constants(shape, r, spec);
  return {c.a(r), c.b(r)};
}

std::pair<double, double> ab_ratios(int r, const GvMShape& shape,
                                    const TabulatedDensity& reference, double mu1) {
  if (r < 1) throw Error(ErrorKind::invalid_argument, "ab_ratios: r must be >= 1");
  const auto c = integral_constants(shape, r, reference, mu1);
  return {c.a(r), c.b(r)};
}

}  // namespace gvm
