// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The gvm-spectral Authors

#include "commands.hpp"

#include <fstream>
#include <functional>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "gvm/estimation.hpp"
#include "gvm/gaussian.hpp"
#include "gvm/spectrum.hpp"
#include "io.hpp"

namespace gvm::cli {

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::invalid_argument: return 3;
    case ErrorKind::parse: return 4;
    case ErrorKind::range: return 5;
    case ErrorKind::infeasible: return 6;
    case ErrorKind::no_convergence: return 7;
    case ErrorKind::degenerate: return 8;
    case ErrorKind::domain: return 9;
    case ErrorKind::overflow: return 10;
    case ErrorKind::quadrature_failure: return 11;
    case ErrorKind::infinite_divergence: return 12;
    case ErrorKind::numerical: return 13;
  }
  return exit_internal;
}

namespace {

using nlohmann::json;

struct Options {
  std::string params;
  std::string reference;
  std::string input;
  std::string out;
  std::optional<int> order;
  std::optional<int> grid;
  std::optional<int> max_lag;
  std::size_t length = 0;
  std::optional<std::uint64_t> seed;
  std::string method = "spectral";
  std::vector<double> thetas;
};

// Writes to --out when given, else to the caller's stream.
void emit(const Options& opt, std::ostream& fallback, const std::function<void(std::ostream&)>& body) {
  if (opt.out.empty()) {
    body(fallback);
    return;
  }
  std::ofstream file(opt.out, std::ios::binary);
  if (!file) throw Error(ErrorKind::invalid_argument, "cannot open " + opt.out + " for writing");
  body(file);
  file.flush();
  if (!file) throw Error(ErrorKind::invalid_argument, "write failed: " + opt.out);
}

std::size_t table_nodes(const Options& opt) {
  if (!opt.grid) return TabulatedDensity::default_nodes;
  if (*opt.grid < static_cast<int>(TabulatedDensity::min_nodes))
    throw Error(ErrorKind::invalid_argument, "--grid must be >= 16 for tabulated densities");
  return static_cast<std::size_t>(*opt.grid);
}

json acvf_json(const Acvf& a) {
  json re = json::array(), im = json::array();
  re.push_back(a.sigma2);
  im.push_back(0.0);
  for (const auto& v : a.values) {
    re.push_back(v.real());
    im.push_back(v.imag());
  }
  return {{"sigma2", a.sigma2}, {"re", re}, {"im", im}};
}

json params_json(const GvMParams& p) {
  return {{"k", p.order()}, {"sigma2", p.sigma2}, {"mus", p.mus}, {"kappas", p.kappas}};
}

void cmd_spectrum(const Options& opt, std::ostream& out) {
  const int grid = opt.grid.value_or(512);
  if (grid < 2) throw Error(ErrorKind::invalid_argument, "--grid must be >= 2");
  const GvMSpectrum s(read_params(opt.params), QuadratureSpec::from_env());
  emit(opt, out, [&](std::ostream& os) {
    os << "theta,density,cdf\n";
    for (int i = 0; i < grid; ++i) {
      const double theta = i + 1 == grid ? pi : -pi + two_pi * i / (grid - 1);
      os << format_real(theta) << ',' << format_real(s.density(theta)) << ',' << format_real(s.cdf(theta))
         << '\n';
    }
  });
}

void cmd_cdf_at(const Options& opt, std::ostream& out) {
  if (opt.thetas.empty()) throw Error(ErrorKind::invalid_argument, "--theta is required");
  const GvMSpectrum s(read_params(opt.params), QuadratureSpec::from_env());
  emit(opt, out, [&](std::ostream& os) {
    os << "theta,cdf\n";
    for (double t : opt.thetas) {
      if (!(t >= -pi && t <= pi)) throw Error(ErrorKind::invalid_argument, "--theta must lie in [-pi, pi]");
      os << format_real(t) << ',' << format_real(s.cdf(t)) << '\n';
    }
  });
}

void cmd_acvf(const Options& opt, std::ostream& out) {
  const GvMParams p = read_params(opt.params);
  const int lags = opt.max_lag.value_or(p.order());
  if (lags < 1) throw Error(ErrorKind::range, "--max-lag must be >= 1");
  const Acvf a = GvMSpectrum(p, QuadratureSpec::from_env()).acvf(lags);
  emit(opt, out, [&](std::ostream& os) {
    os << "lag,re,im\n";
    for (int r = 0; r <= lags; ++r)
      os << r << ',' << format_real(a(r).real()) << ',' << format_real(a(r).imag()) << '\n';
  });
}

void cmd_estimate(const Options& opt, std::ostream& out) {
  const ComplexSeries x = read_series(opt.input);
  const int k = *opt.order;
  if (k < 1) throw Error(ErrorKind::invalid_argument, "--order must be >= 1");
  if (x.size() < static_cast<std::size_t>(k) + 1)
    throw Error(ErrorKind::range, "series length " + std::to_string(x.size()) + " is below order + 1 = " +
                                      std::to_string(k + 1));
  const Acvf target = sample_acvf(x, k);
  const FitReport fit = solve_moments(target, k, SolverConfig::from_env());
  json j = params_json(fit.params);
  j["residual_norm"] = fit.residual_norm;
  j["iterations"] = fit.iterations;
  j["converged"] = fit.converged;
  j["acvf"] = acvf_json(target);
  emit(opt, out, [&](std::ostream& os) { os << j.dump(2) << '\n'; });
}

void cmd_simulate(const Options& opt, std::ostream& out) {
  const GvMParams p = read_params(opt.params);
  SimConfig cfg;
  cfg.length = opt.length;
  cfg.seed = *opt.seed;
  cfg.method = opt.method == "exact-cholesky" ? SimMethod::exact_cholesky : SimMethod::spectral;
  if (opt.grid) {
    if (*opt.grid < 0) throw Error(ErrorKind::invalid_argument, "--grid must be >= 0");
    cfg.spectral_nodes = static_cast<std::size_t>(*opt.grid);
  }
  const ComplexSeries x = simulate(p, cfg);
  emit(opt, out, [&](std::ostream& os) { write_series(os, x); });
}

void cmd_entropy(const Options& opt, std::ostream& out) {
  const GvMParams p = read_params(opt.params);
  const GvMSpectrum s(p, QuadratureSpec::from_env());
  const double burg = burg_entropy(s.tabulate(table_nodes(opt)));
  const double temporal = temporal_entropy(build_sigma(s.acvf(p.order())));
  const json j = {{"k", p.order()},
                  {"spectral_entropy", s.entropy()},
                  {"burg_entropy", burg},
                  {"temporal_entropy", temporal}};
  emit(opt, out, [&](std::ostream& os) { os << j.dump(2) << '\n'; });
}

void cmd_kl(const Options& opt, std::ostream& out) {
  const GvMParams p = read_params(opt.params);
  const std::size_t nodes = table_nodes(opt);
  const auto spec = QuadratureSpec::from_env();
  const TabulatedDensity f = GvMSpectrum(p, spec).tabulate(nodes);
  const TabulatedDensity g = opt.reference.empty()
                                 ? TabulatedDensity::uniform(f.mass(), nodes)
                                 : GvMSpectrum(read_params(opt.reference), spec).tabulate(nodes);
  const json j = {{"kl", kl_information(f, g)}};
  emit(opt, out, [&](std::ostream& os) { os << j.dump(2) << '\n'; });
}

void cmd_periodogram(const Options& opt, std::ostream& out) {
  const Periodogram pg = periodogram(read_series(opt.input));
  emit(opt, out, [&](std::ostream& os) {
    os << "freq,value\n";
    for (std::size_t i = 0; i < pg.grid_size(); ++i)
      os << format_real(pg.frequency[i]) << ',' << format_real(pg.value[i]) << '\n';
  });
}

void cmd_temporal_entropy(const Options& opt, std::ostream& out) {
  if (opt.params.empty() == opt.input.empty())
    throw Error(ErrorKind::invalid_argument, "exactly one of --params and --input is required");
  Acvf a;
  int k = 0;
  if (!opt.params.empty()) {
    const GvMParams p = read_params(opt.params);
    k = opt.order.value_or(p.order());
    if (k < 1) throw Error(ErrorKind::invalid_argument, "--order must be >= 1");
    a = GvMSpectrum(p, QuadratureSpec::from_env()).acvf(k);
  } else {
    if (!opt.order) throw Error(ErrorKind::invalid_argument, "--order is required with --input");
    k = *opt.order;
    if (k < 1) throw Error(ErrorKind::invalid_argument, "--order must be >= 1");
    a = sample_acvf(read_series(opt.input), k);
  }
  const json j = {{"k", k}, {"temporal_entropy", temporal_entropy(build_sigma(a))}};
  emit(opt, out, [&](std::ostream& os) { os << j.dump(2) << '\n'; });
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{
      "GvM_k maximum-entropy spectral analysis.\n"
      "Angles are in radians on (-pi, pi]. GVM_TOL overrides the default tolerances.",
      "gvm"};
  app.require_subcommand(1);
  Options opt;

  auto add_out = [&](CLI::App* sub) { sub->add_option("--out", opt.out, "Output file (default: stdout)"); };
  auto add_params = [&](CLI::App* sub, bool required) {
    auto* o = sub->add_option("--params", opt.params, "Parameter file, JSON {k, sigma2, mus, kappas}");
    if (required) o->required();
    return o;
  };

  auto* spectrum = app.add_subcommand("spectrum", "Density and distribution function on an equispaced grid");
  add_params(spectrum, true);
  spectrum->add_option("--grid", opt.grid, "Grid points from -pi to pi inclusive (default 512)");
  add_out(spectrum);

  auto* cdf_at = app.add_subcommand("cdf-at", "Spectral distribution function at given angles");
  add_params(cdf_at, true);
  cdf_at->add_option("--theta", opt.thetas, "Angle in [-pi, pi]; repeatable")->required();
  add_out(cdf_at);

  auto* acvf = app.add_subcommand("acvf", "Autocovariances psi(0..max-lag) of the model");
  add_params(acvf, true);
  acvf->add_option("--max-lag", opt.max_lag, "Largest lag (default k)");
  add_out(acvf);

  auto* estimate = app.add_subcommand("estimate", "Fit a GvM_k spectrum to a series by trigonometric moments");
  estimate->add_option("--input", opt.input, "Series CSV with header re,im")->required();
  estimate->add_option("--order", opt.order, "Model order k")->required();
  add_out(estimate);

  auto* sim = app.add_subcommand("simulate", "Simulate a Gaussian series with a GvM_k spectrum");
  add_params(sim, true);
  sim->add_option("--length", opt.length, "Number of observations")->required()->check(CLI::PositiveNumber);
  sim->add_option("--seed", opt.seed, "Random seed")->required();
  sim->add_option("--method", opt.method, "spectral (default) or exact-cholesky")
      ->check(CLI::IsMember({"spectral", "exact-cholesky"}));
  sim->add_option("--grid", opt.grid, "Spectral cells M (default max(4096, next power of two >= length))");
  add_out(sim);

  auto* entropy = app.add_subcommand("entropy", "Spectral, Burg and temporal entropies of the model");
  add_params(entropy, true);
  entropy->add_option("--grid", opt.grid, "Nodes of the density table for the Burg entropy (default 4096)");
  add_out(entropy);

  auto* kl = app.add_subcommand("kl", "Spectral Kullback-Leibler information of the model from a reference");
  add_params(kl, true);
  kl->add_option("--reference", opt.reference, "Reference parameter file (default: uniform, same sigma2)");
  kl->add_option("--grid", opt.grid, "Table nodes (default 4096)");
  add_out(kl);

  auto* pgram = app.add_subcommand("periodogram", "Periodogram of a series on the Fourier grid");
  pgram->add_option("--input", opt.input, "Series CSV with header re,im")->required();
  add_out(pgram);

  auto* temporal = app.add_subcommand("temporal-entropy", "Entropy of k + 1 consecutive observations");
  add_params(temporal, false);
  temporal->add_option("--input", opt.input, "Series CSV; uses its sample autocovariances");
  temporal->add_option("--order", opt.order, "k (default: the model order)");
  add_out(temporal);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "gvm: " << e.what() << '\n';
    return exit_usage;
  }

  try {
    if (spectrum->parsed()) cmd_spectrum(opt, out);
    else if (cdf_at->parsed()) cmd_cdf_at(opt, out);
    else if (acvf->parsed()) cmd_acvf(opt, out);
    else if (estimate->parsed()) cmd_estimate(opt, out);
    else if (sim->parsed()) cmd_simulate(opt, out);
    else if (entropy->parsed()) cmd_entropy(opt, out);
    else if (kl->parsed()) cmd_kl(opt, out);
    else if (pgram->parsed()) cmd_periodogram(opt, out);
    else if (temporal->parsed()) cmd_temporal_entropy(opt, out);
  } catch (const Error& e) {
    err << "gvm: " << to_string(e.kind()) << ": " << e.what() << '\n';
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    err << "gvm: internal error: " << e.what() << '\n';
    return exit_internal;
  }
  return 0;
}

}  // namespace gvm::cli
