// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The gvm-spectral Authors

#pragma once

#include <iosfwd>
#include <string>

#include "gvm/estimation.hpp"
#include "gvm/spectrum.hpp"

namespace gvm::cli {

/// {"k": 2, "sigma2": 1.0, "mus": [..], "kappas": [..]}; other keys are ignored.
/// Throws ErrorKind::parse for malformed JSON or missing fields and
/// ErrorKind::invalid_argument naming the violated parameter invariant.
GvMParams parse_params(std::istream& in, const std::string& source);
GvMParams read_params(const std::string& path);

/// CSV with header `re,im` and one observation per row; LF or CRLF.
/// Parse errors carry the 1-based line number.
ComplexSeries parse_series(std::istream& in, const std::string& source);
ComplexSeries read_series(const std::string& path);

void write_series(std::ostream& out, const ComplexSeries& x);

/// printf-style %.17g.
std::string format_real(double v);

}  // namespace gvm::cli
