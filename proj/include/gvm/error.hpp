// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The gvm-spectral Authors

#pragma once

#include <stdexcept>
#include <string>

namespace gvm {

enum class ErrorKind {
  invalid_argument,     // violated precondition or type invariant
  range,                // index/lag/length out of range
  overflow,             // result outside the double exponent range
  quadrature_failure,   // trapezoid refinement cap reached
  infinite_divergence,  // KL support violation
  domain,               // log of a nonpositive density value
  infeasible,           // autocovariance target outside the admissible set
  no_convergence,       // moment solver failed
  degenerate,           // singular covariance, entropy undefined
  numerical,            // Cholesky failed after jitter escalation
  parse,                // malformed input file
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace gvm
