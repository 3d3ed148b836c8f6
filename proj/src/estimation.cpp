// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The gvm-spectral Authors

#include "gvm/estimation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <optional>
#include <string>

#include <Eigen/Cholesky>
#include <Eigen/Core>

#include "fft.hpp"
#include "gvm/error.hpp"

namespace gvm {

void ComplexSeries::validate() const {
  if (values.size() < 2) throw Error(ErrorKind::invalid_argument, "ComplexSeries: need n >= 2 observations");
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!std::isfinite(values[i].real()) || !std::isfinite(values[i].imag()))
      throw Error(ErrorKind::invalid_argument,
                  "ComplexSeries: observation " + std::to_string(i + 1) + " is not finite");
  }
}

namespace {

// Deviations from the sample mean; the mean is accumulated relative to the
// first observation so a constant series centers to exact zeros.
std::vector<std::complex<double>> centered(const ComplexSeries& x) {
  const auto origin = x.values.front();
  std::complex<double> offset = 0.0;
  for (const auto& v : x.values) offset += v - origin;
  offset /= static_cast<double>(x.size());
  std::vector<std::complex<double>> y(x.size());
  for (std::size_t i = 0; i < y.size(); ++i) y[i] = (x.values[i] - origin) - offset;
  return y;
}

}  // namespace

Acvf sample_acvf(const ComplexSeries& x, int max_lag) {
  x.validate();
  const auto n = static_cast<long>(x.size());
  if (max_lag < 0 || max_lag > n - 1)
    throw Error(ErrorKind::range, "sample_acvf: max_lag " + std::to_string(max_lag) +
                                      " outside 0..n-1 = " + std::to_string(n - 1));
  const auto y = centered(x);
  auto lag_sum = [&](long r) {
    std::complex<double> s = 0.0;
    for (long j = 0; j + r < n; ++j) s += y[j + r] * std::conj(y[j]);
    return s / static_cast<double>(n);
  };
  Acvf out{lag_sum(0).real(), {}};
  out.values.reserve(static_cast<std::size_t>(max_lag));
  for (long r = 1; r <= max_lag; ++r) out.values.push_back(lag_sum(r));
  return out;
}

Periodogram periodogram(const ComplexSeries& x, int oversample) {
  x.validate();
  if (oversample < 1) throw Error(ErrorKind::invalid_argument, "periodogram: oversample must be >= 1");
  const long n = static_cast<long>(x.size());
  const long grid = n * oversample;
  auto padded = centered(x);
  padded.resize(static_cast<std::size_t>(grid), 0.0);
  const auto transform = detail::dft(padded, -1);

  Periodogram out;
  out.sample_size = static_cast<std::size_t>(n);
  for (long j = -((grid - 1) / 2); j <= grid / 2; ++j) {
    const auto bin = transform[static_cast<std::size_t>(((j % grid) + grid) % grid)];
    out.index.push_back(j);
    out.frequency.push_back(two_pi * static_cast<double>(j) / static_cast<double>(grid));
    out.value.push_back(std::norm(bin) / static_cast<double>(n));
  }
  return out;
}

Acvf acvf_from_periodogram(const Periodogram& p) {
  const long grid = static_cast<long>(p.grid_size());
  const long n = static_cast<long>(p.sample_size);
  if (grid == 0 || n < 1 || grid < n)
    throw Error(ErrorKind::invalid_argument, "acvf_from_periodogram: inconsistent periodogram");
  std::vector<std::complex<double>> spectrum(static_cast<std::size_t>(grid), 0.0);
  for (std::size_t i = 0; i < p.value.size(); ++i)
    spectrum[static_cast<std::size_t>(((p.index[i] % grid) + grid) % grid)] = p.value[i];
  const auto lags = detail::dft(spectrum, +1);
  Acvf out{lags[0].real() / static_cast<double>(grid), {}};
  for (long r = 1; r < n; ++r) out.values.push_back(lags[static_cast<std::size_t>(r)] / static_cast<double>(grid));
  return out;
}

void SolverConfig::validate() const {
  if (!(residual_tol > 0.0)) throw Error(ErrorKind::invalid_argument, "SolverConfig: residual_tol must be > 0");
  if (max_iter < 1) throw Error(ErrorKind::invalid_argument, "SolverConfig: max_iter must be >= 1");
  if (multistart_grid < 1) throw Error(ErrorKind::invalid_argument, "SolverConfig: multistart_grid must be >= 1");
  if (!(fd_step > 0.0)) throw Error(ErrorKind::invalid_argument, "SolverConfig: fd_step must be > 0");
}

SolverConfig SolverConfig::from_env() {
  SolverConfig cfg;
  if (const char* tol = std::getenv("GVM_TOL")) {
    char* end = nullptr;
    const double v = std::strtod(tol, &end);
    if (end == tol || *end != '\0')
      throw Error(ErrorKind::invalid_argument, std::string("GVM_TOL is not a number: ") + tol);
    cfg.residual_tol = v;
  }
  cfg.validate();
  return cfg;
}

namespace {

double residual_from_constants(const Acvf& target, double mu1, const IntegralConstants& c, int order,
                               double sigma2) {
  double sq = 0.0;
  for (int r = 1; r <= order; ++r) {
    const double a = c.a(r);
    const double b = c.b(r);
    const double cr = std::cos(r * mu1);
    const double sr = std::sin(r * mu1);
    const double dn = target.nu(r) - sigma2 * (cr * a - sr * b);
    const double dx = target.xi(r) - sigma2 * (sr * a + cr * b);
    sq += dn * dn + dx * dx;
  }
  return std::sqrt(sq);
}

void check_residual_inputs(const Acvf& target, int order) {
  if (order < 1) throw Error(ErrorKind::invalid_argument, "moment equations: order must be >= 1");
  if (target.max_lag() < order)
    throw Error(ErrorKind::range, "moment equations: target has " + std::to_string(target.max_lag()) +
                                      " lags, order " + std::to_string(order) + " needs more");
}

}  // namespace

double moment_residual(const Acvf& target, const GvMParams& p, const QuadratureSpec& spec) {
  p.validate();
  check_residual_inputs(target, p.order());
  const auto c = integral_constants(p.shape(), p.order(), spec);
  return residual_from_constants(target, p.mus[0], c, p.order(), p.sigma2);
}

double moment_residual_complex(const Acvf& target, const GvMParams& p, const QuadratureSpec& spec) {
  p.validate();
  check_residual_inputs(target, p.order());
  const auto c = integral_constants(p.shape(), p.order(), spec);
  double sq = 0.0;
  for (int r = 1; r <= p.order(); ++r) {
    const auto model = p.sigma2 * std::polar(1.0, r * p.mus[0]) * std::complex<double>(c.a(r), c.b(r));
    sq += std::norm(target(r) - model);
  }
  return std::sqrt(sq);
}

double moment_residual(const Acvf& target, const Tilt& tilt, const TabulatedDensity& reference) {
  tilt.validate();
  check_residual_inputs(target, tilt.order());
  const auto c = integral_constants(tilt.shape(), tilt.order(), reference, tilt.mus[0]);
  return residual_from_constants(target, tilt.mus[0], c, tilt.order(), target.sigma2);
}

namespace {

// Discrete reference measure on (-pi, pi]: node angles with weights summing to one.
struct ReferenceMeasure {
  std::vector<double> theta;
  std::vector<double> weight;
};

ReferenceMeasure uniform_measure(std::size_t nodes) {
  ReferenceMeasure m;
  m.theta.resize(nodes);
  m.weight.assign(nodes, 1.0 / static_cast<double>(nodes));
  for (std::size_t i = 0; i < nodes; ++i)
    m.theta[i] = -pi + two_pi * static_cast<double>(i + 1) / static_cast<double>(nodes);
  return m;
}

ReferenceMeasure tabulated_measure(const TabulatedDensity& h) {
  ReferenceMeasure m;
  double total = 0.0;
  for (double v : h.values()) total += v;
  for (std::size_t i = 0; i < h.size(); ++i) {
    m.theta.push_back(h.theta(i));
    m.weight.push_back(h.values()[i] / total);
  }
  return m;
}

// The maximum-entropy moment problem in natural coordinates
// x = (a_1, b_1, ..., a_k, b_k), exponent sum_r a_r cos r t + b_r sin r t.
//
// With t the normalized target (nu_r, xi_r) / sigma2, the dual objective
//   phi(x) = log integral exp(exponent) dH - x . t
// is strictly convex; its gradient is model moments minus t, i.e. the moment
// equations divided by sigma2, and its Hessian is the covariance of the
// trigonometric features under the tilted measure.
class DualProblem {
 public:
  DualProblem(const Acvf& target, int order, std::optional<ReferenceMeasure> fixed)
      : order_(order), sigma2_(target.sigma2), fixed_(std::move(fixed)), t_(2 * order) {
    for (int r = 1; r <= order; ++r) {
      t_(2 * r - 2) = target.nu(r) / sigma2_;
      t_(2 * r - 1) = target.xi(r) / sigma2_;
    }
  }

  int dim() const { return 2 * order_; }
  double sigma2() const { return sigma2_; }
  const Eigen::VectorXd& target() const { return t_; }

  struct Eval {
    double objective;
    Eigen::VectorXd gradient;
    Eigen::MatrixXd hessian;
  };

  Eval evaluate(const Eigen::VectorXd& x, bool with_hessian) {
    const auto& m = measure_for(x);
    const std::size_t nodes = m.theta.size();
    const int d = dim();
    std::vector<double> exponent(nodes);
    double top = -std::numeric_limits<double>::infinity();
    Eigen::VectorXd feat(d);
    for (std::size_t i = 0; i < nodes; ++i) {
      features(m.theta[i], feat);
      exponent[i] = x.dot(feat);
      if (m.weight[i] > 0.0) top = std::max(top, exponent[i]);
    }
    double z = 0.0;
    Eigen::VectorXd mean = Eigen::VectorXd::Zero(d);
    Eigen::MatrixXd second = Eigen::MatrixXd::Zero(d, d);
    for (std::size_t i = 0; i < nodes; ++i) {
      if (m.weight[i] == 0.0) continue;
      const double w = m.weight[i] * std::exp(exponent[i] - top);
      features(m.theta[i], feat);
      z += w;
      mean += w * feat;
      if (with_hessian) second.selfadjointView<Eigen::Lower>().rankUpdate(feat, w);
    }
    mean /= z;
    Eval e{top + std::log(z) - x.dot(t_), mean - t_, {}};
    if (with_hessian) {
      second = second.selfadjointView<Eigen::Lower>();
      e.hessian = second / z - mean * mean.transpose();
    }
    return e;
  }

  double residual(const Eigen::VectorXd& gradient) const { return sigma2_ * gradient.norm(); }

 private:
  void features(double theta, Eigen::VectorXd& out) const {
    for (int r = 1; r <= order_; ++r) {
      out(2 * r - 2) = std::cos(r * theta);
      out(2 * r - 1) = std::sin(r * theta);
    }
  }

  // Node count for the uniform reference: the aliasing error of the
  // trapezoid rule for exp(K cos k t) falls like exp(-(N/k)^2 / (2K)).
  const ReferenceMeasure& measure_for(const Eigen::VectorXd& x) {
    if (fixed_) return *fixed_;
    double total = 0.0;
    for (int r = 0; r < order_; ++r) total += std::hypot(x(2 * r), x(2 * r + 1));
    const double want = std::max(512.0, 16.0 * order_ * (8.0 * std::sqrt(total) + 8.0));
    std::size_t nodes = 512;
    while (static_cast<double>(nodes) < want) nodes *= 2;
    if (nodes != uniform_.theta.size()) uniform_ = uniform_measure(nodes);
    return uniform_;
  }

  int order_;
  double sigma2_;
  std::optional<ReferenceMeasure> fixed_;
  ReferenceMeasure uniform_;
  Eigen::VectorXd t_;
};

struct NewtonResult {
  Eigen::VectorXd x;
  double residual;
  int iterations;
};

NewtonResult damped_newton(DualProblem& problem, Eigen::VectorXd x, const SolverConfig& cfg) {
  const int d = problem.dim();
  auto e = problem.evaluate(x, true);
  double residual = problem.residual(e.gradient);
  const double goal = 0.1 * cfg.residual_tol;
  int it = 0;
  for (; it < cfg.max_iter && residual > goal; ++it) {
    Eigen::MatrixXd jac(d, d);
    if (cfg.jacobian == JacobianMode::analytic) {
      jac = e.hessian;
    } else {
      for (int j = 0; j < d; ++j) {
        Eigen::VectorXd shifted = x;
        shifted(j) += cfg.fd_step;
        jac.col(j) = (problem.evaluate(shifted, false).gradient - e.gradient) / cfg.fd_step;
      }
      jac = 0.5 * (jac + jac.transpose()).eval();
    }
    Eigen::LDLT<Eigen::MatrixXd> ldlt(jac);
    Eigen::VectorXd step = -ldlt.solve(e.gradient);
    if (ldlt.info() != Eigen::Success || !step.allFinite() || step.dot(e.gradient) >= 0.0) {
      // fall back to a Levenberg-regularized step
      const double ridge = 1e-8 + jac.diagonal().cwiseAbs().maxCoeff() * 1e-6;
      step = -(jac + ridge * Eigen::MatrixXd::Identity(d, d)).ldlt().solve(e.gradient);
      if (!step.allFinite() || step.dot(e.gradient) >= 0.0) step = -e.gradient;
    }
    // backtracking on the convex dual objective
    const double slope = step.dot(e.gradient);
    double alpha = 1.0;
    bool moved = false;
    for (int halving = 0; halving < 60; ++halving, alpha *= 0.5) {
      const Eigen::VectorXd trial = x + alpha * step;
      auto candidate = problem.evaluate(trial, true);
      const double candidate_residual = problem.residual(candidate.gradient);
      const bool descends = candidate.objective <= e.objective + 1e-4 * alpha * slope;
      // near the optimum the objective stalls at round-off; trust the gradient there
      const bool flat = std::abs(candidate.objective - e.objective) <=
                            64.0 * std::numeric_limits<double>::epsilon() *
                                (1.0 + std::abs(e.objective)) &&
                        candidate_residual < residual;
      if (std::isfinite(candidate.objective) && (descends || flat)) {
        x = trial;
        e = std::move(candidate);
        residual = candidate_residual;
        moved = true;
        break;
      }
    }
    if (!moved) break;
  }
  return {std::move(x), residual, it};
}

GvMParams params_from_natural(const Eigen::VectorXd& x, int order, double sigma2) {
  GvMParams p{sigma2, {}, {}};
  for (int r = 1; r <= order; ++r) {
    const double a = x(2 * r - 2);
    const double b = x(2 * r - 1);
    const double kappa = std::hypot(a, b);
    p.kappas.push_back(kappa);
    p.mus.push_back(kappa == 0.0 ? 0.0 : wrap_angle(std::atan2(b, a) / r, two_pi / r));
  }
  return p;
}

void check_feasible(const Acvf& target, int order) {
  if (order < 1) throw Error(ErrorKind::invalid_argument, "solve_moments: order must be >= 1");
  if (target.max_lag() < order)
    throw Error(ErrorKind::range, "solve_moments: target has " + std::to_string(target.max_lag()) +
                                      " lags but order is " + std::to_string(order));
  if (!std::isfinite(target.sigma2) || target.sigma2 < 0.0)
    throw Error(ErrorKind::infeasible, "solve_moments: sigma2 must be finite and >= 0");
  Acvf head{target.sigma2, {target.values.begin(), target.values.begin() + order}};
  for (int r = 1; r <= order; ++r) {
    const auto v = head(r);
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag()) ||
        (v != 0.0 && std::abs(v) >= (1.0 - 1e-12) * target.sigma2))
      throw Error(ErrorKind::infeasible, "solve_moments: |psi_" + std::to_string(r) +
                                             "| must be below sigma2 (strictly inside the admissible set)");
  }
  const double lo = head.min_toeplitz_eigenvalue();
  if (lo < -1e-10 * target.sigma2)
    throw Error(ErrorKind::infeasible,
                "solve_moments: autocovariance Toeplitz matrix is not nonnegative definite");
}

bool is_white(const Acvf& target, int order) {
  for (int r = 1; r <= order; ++r)
    if (target(r) != std::complex<double>(0.0, 0.0)) return false;
  return true;
}

double kappa_energy(const GvMParams& p) {
  double s = 0.0;
  for (double k : p.kappas) s += k * k;
  return s;
}

// Runs Newton from the uniform start, then from a grid of rescaled and
// phase-rotated starts if that fails. Returns the lowest-residual converged
// run (ties: least concentrated), or throws.
template <typename FinalResidual>
FitReport solve_dual(DualProblem& problem, int order, const SolverConfig& cfg,
                     FinalResidual final_residual) {
  std::vector<Eigen::VectorXd> starts{Eigen::VectorXd::Zero(problem.dim())};
  std::optional<FitReport> best;
  double best_residual = std::numeric_limits<double>::infinity();
  auto consider = [&](const NewtonResult& run) {
    auto params = params_from_natural(run.x, order, problem.sigma2());
    const double residual = final_residual(params);
    best_residual = std::min(best_residual, residual);
    if (!(residual <= cfg.residual_tol)) return;
    FitReport report{std::move(params), residual, run.iterations, true};
    if (!best || report.residual_norm < best->residual_norm ||
        (report.residual_norm == best->residual_norm &&
         kappa_energy(report.params) < kappa_energy(best->params)))
      best = std::move(report);
  };

  consider(damped_newton(problem, starts.front(), cfg));
  if (best) return *best;

  const int grid = cfg.multistart_grid;
  const int phases = order >= 2 ? grid : 1;
  for (int s = 1; s <= grid; ++s) {
    for (int m = 0; m < phases; ++m) {
      Eigen::VectorXd x0 = 2.0 * static_cast<double>(s) / grid * problem.target();
      for (int r = 2; r <= order; ++r) {
        const double angle = two_pi * m / phases;
        const double a = x0(2 * r - 2), b = x0(2 * r - 1);
        x0(2 * r - 2) = std::cos(angle) * a - std::sin(angle) * b;
        x0(2 * r - 1) = std::sin(angle) * a + std::cos(angle) * b;
      }
      consider(damped_newton(problem, x0, cfg));
    }
  }
  if (best) return *best;
  throw Error(ErrorKind::no_convergence,
              "solve_moments: no start reached residual_tol " + std::to_string(cfg.residual_tol) +
                  " (best residual " + std::to_string(best_residual) + ")");
}

}  // namespace

FitReport solve_moments(const Acvf& target, int order, const SolverConfig& cfg) {
  cfg.validate();
  check_feasible(target, order);
  if (is_white(target, order)) return {GvMParams::uniform(target.sigma2, order), 0.0, 0, true};
  DualProblem problem(target, order, std::nullopt);
  return solve_dual(problem, order, cfg,
                    [&](const GvMParams& p) { return moment_residual(target, p); });
}

FitReport solve_moments(const Acvf& target, int order, const TabulatedDensity& reference,
                        const SolverConfig& cfg) {
  cfg.validate();
  check_feasible(target, order);
  if (std::abs(reference.mass() - target.sigma2) > 1e-8 * target.sigma2)
    throw Error(ErrorKind::invalid_argument, "solve_moments: reference mass must equal target sigma2");
  DualProblem problem(target, order, tabulated_measure(reference));
  return solve_dual(problem, order, cfg, [&](const GvMParams& p) {
    return moment_residual(target, Tilt::of(p), reference);
  });
}

double bessel_ratio(double kappa) {
  if (!std::isfinite(kappa) || kappa < 0.0)
    throw Error(ErrorKind::invalid_argument, "bessel_ratio: kappa must be finite and >= 0");
  if (kappa == 0.0) return 0.0;
  const auto s = bessel_i_scaled_sequence(1, kappa);
  return s[1] / s[0];
}

namespace {

struct Inversion {
  double kappa;
  int iterations;
};

Inversion invert_bessel_ratio(double ratio) {
  if (!(ratio >= 0.0 && ratio < 1.0))
    throw Error(ErrorKind::infeasible, "inverse_bessel_ratio: ratio must lie in [0, 1)");
  if (ratio == 0.0) return {0.0, 0};
  double lo = 0.0;
  double hi = 1.0;
  while (bessel_ratio(hi) < ratio) {
    lo = hi;
    hi *= 2.0;
    if (hi > 1e15) throw Error(ErrorKind::infeasible, "inverse_bessel_ratio: ratio too close to 1");
  }
  // small-ratio series A ~ k/2 and large-ratio asymptote A ~ 1 - 1/(2k)
  double kappa = ratio < 0.5 ? 2.0 * ratio : 0.5 / (1.0 - ratio);
  if (!(kappa > lo && kappa < hi)) kappa = 0.5 * (lo + hi);
  int it = 0;
  for (; it < 200; ++it) {
    const double a = bessel_ratio(kappa);
    const double f = a - ratio;
    if (f == 0.0) break;
    if (f < 0.0) lo = kappa;
    else hi = kappa;
    const double slope = 1.0 - a / kappa - a * a;
    double next = kappa - f / slope;
    if (!(slope > 0.0) || !(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - kappa) <= 4.0 * std::numeric_limits<double>::epsilon() * kappa ||
        hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * hi) {
      kappa = next;
      break;
    }
    kappa = next;
  }
  return {kappa, it};
}

}  // namespace

double inverse_bessel_ratio(double ratio) { return invert_bessel_ratio(ratio).kappa; }

FitReport solve_vm(const Acvf& target) {
  if (target.max_lag() < 1) throw Error(ErrorKind::range, "solve_vm: target needs lag 1");
  if (!std::isfinite(target.sigma2) || target.sigma2 <= 0.0)
    throw Error(ErrorKind::infeasible, "solve_vm: sigma2 must be finite and > 0");
  const auto psi = target(1);
  const double ratio = std::abs(psi) / target.sigma2;
  if (!(ratio < 1.0 - 1e-12))
    throw Error(ErrorKind::infeasible, "solve_vm: |psi_1| must be below sigma2");
  const auto inv = invert_bessel_ratio(ratio);
  GvMParams p = GvMParams::von_mises(inv.kappa == 0.0 ? 0.0 : wrap_angle(std::arg(psi)), inv.kappa,
                                     target.sigma2);
  const double residual = std::abs(psi - target.sigma2 * bessel_ratio(inv.kappa) *
                                             std::polar(1.0, p.mus[0]));
  return {std::move(p), residual, inv.iterations, true};
}

double burg_entropy(const TabulatedDensity& f) {
  double sum = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double v = f.values()[i];
    if (!(v > 0.0))
      throw Error(ErrorKind::domain, "burg_entropy: density is not positive at theta = " +
                                         std::to_string(f.theta(i)));
    sum += std::log(v);
  }
  return sum * f.step();
}

}  // namespace gvm
