// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The gvm-spectral Authors

#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace gvm {

/// A spectral density sampled on the equispaced grid
/// theta_i = -pi + 2 pi (i + 1) / N, i = 0..N-1, i.e. on (-pi, pi].
///
/// Integrals over the table use the periodic trapezoid rule on its own nodes;
/// off-grid values are linear interpolants (periodic wrap between the last and
/// first node). N is always even and at least 16.
class TabulatedDensity {
 public:
  static constexpr std::size_t default_nodes = 4096;
  static constexpr std::size_t min_nodes = 16;

  /// Throws ErrorKind::invalid_argument unless the values are finite and
  /// nonnegative, N is even and >= 16, and the trapezoid integral equals
  /// mass within 1e-8 relative.
  TabulatedDensity(std::vector<double> values, double mass);

  static TabulatedDensity uniform(double mass, std::size_t nodes = default_nodes);

  /// Samples f on the grid; the mass is the trapezoid integral of the samples.
  /// An odd node count is rounded up.
  static TabulatedDensity from_function(const std::function<double(double)>& f,
                                        std::size_t nodes = default_nodes);

  std::size_t size() const { return values_.size(); }
  double step() const;
  double theta(std::size_t i) const;
  std::span<const double> values() const { return values_; }
  double mass() const { return mass_; }

  /// Linear interpolation at any angle (wrapped into (-pi, pi]).
  double operator()(double theta) const;

  double integral() const;

  /// Linear interpolation onto a grid with a different node count.
  TabulatedDensity resampled(std::size_t nodes) const;

 private:
  std::vector<double> values_;
  double mass_;
};

}  // namespace gvm
