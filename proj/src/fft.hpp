// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The gvm-spectral Authors

#pragma once

#include <complex>
#include <vector>

namespace gvm::detail {

/// Unnormalized DFT: out[j] = sum_t in[t] exp(sign * 2 pi i j t / n), sign = -1 or +1.
std::vector<std::complex<double>> dft(const std::vector<std::complex<double>>& in, int sign);

}  // namespace gvm::detail
