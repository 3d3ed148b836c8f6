// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The gvm-spectral Authors

#include "gvm/tabulated_density.hpp"

#include <cmath>
#include <string>

#include "gvm/error.hpp"
#include "gvm/special.hpp"

namespace gvm {

namespace {

double trapezoid(const std::vector<double>& values) {
  double sum = 0.0;
  for (double v : values) sum += v;
  return sum * two_pi / static_cast<double>(values.size());
}

}  // namespace

TabulatedDensity::TabulatedDensity(std::vector<double> values, double mass)
    : values_(std::move(values)), mass_(mass) {
  if (values_.size() < min_nodes || values_.size() % 2 != 0)
    throw Error(ErrorKind::invalid_argument,
                "TabulatedDensity: node count must be even and >= 16, got " +
                    std::to_string(values_.size()));
  for (double v : values_) {
    if (!std::isfinite(v) || v < 0.0)
      throw Error(ErrorKind::invalid_argument, "TabulatedDensity: values must be finite and >= 0");
  }
  if (!std::isfinite(mass_) || mass_ <= 0.0)
    throw Error(ErrorKind::invalid_argument, "TabulatedDensity: mass must be finite and > 0");
  const double integral = trapezoid(values_);
  if (std::abs(integral - mass_) > 1e-8 * mass_)
    throw Error(ErrorKind::invalid_argument, "TabulatedDensity: trapezoid integral " +
                                                 std::to_string(integral) + " does not match mass " +
                                                 std::to_string(mass_));
}

TabulatedDensity TabulatedDensity::uniform(double mass, std::size_t nodes) {
  return TabulatedDensity(std::vector<double>(nodes, mass / two_pi), mass);
}

TabulatedDensity TabulatedDensity::from_function(const std::function<double(double)>& f,
                                                 std::size_t nodes) {
  if (nodes % 2 != 0) ++nodes;
  if (nodes < min_nodes)
    throw Error(ErrorKind::invalid_argument, "TabulatedDensity: need at least 16 nodes");
  std::vector<double> values(nodes);
  for (std::size_t i = 0; i < nodes; ++i)
    values[i] = f(-pi + two_pi * static_cast<double>(i + 1) / static_cast<double>(nodes));
  const double mass = trapezoid(values);
  return TabulatedDensity(std::move(values), mass);
}

double TabulatedDensity::step() const { return two_pi / static_cast<double>(values_.size()); }

double TabulatedDensity::theta(std::size_t i) const {
  return -pi + two_pi * static_cast<double>(i + 1) / static_cast<double>(values_.size());
}

double TabulatedDensity::operator()(double theta) const {
  const double n = static_cast<double>(values_.size());
  // position measured in nodes from -pi; node i sits at position i + 1
  double pos = std::fmod((theta + pi) / two_pi, 1.0);
  if (pos < 0.0) pos += 1.0;
  pos *= n;
  const double base = std::floor(pos);
  const double frac = pos - base;
  const std::size_t size = values_.size();
  // position p corresponds to node index p - 1 (mod size)
  const std::size_t lo = (static_cast<std::size_t>(base) + size - 1) % size;
  const std::size_t hi = (lo + 1) % size;
  return (1.0 - frac) * values_[lo] + frac * values_[hi];
}

double TabulatedDensity::integral() const { return trapezoid(values_); }

TabulatedDensity TabulatedDensity::resampled(std::size_t nodes) const {
  if (nodes == values_.size()) return *this;
  if (nodes % 2 != 0) ++nodes;
  std::vector<double> values(nodes);
  for (std::size_t i = 0; i < nodes; ++i)
    values[i] = (*this)(-pi + two_pi * static_cast<double>(i + 1) / static_cast<double>(nodes));
  // linear interpolation moves the trapezoid mass slightly; rescale to keep it
  const double integral = trapezoid(values);
  if (integral > 0.0)
    for (auto& v : values) v *= mass_ / integral;
  return TabulatedDensity(std::move(values), mass_);
}

}  // namespace gvm
