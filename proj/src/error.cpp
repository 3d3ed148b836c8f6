// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The gvm-spectral Authors

#include "gvm/error.hpp"

namespace gvm {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::invalid_argument: return "invalid argument";
    case ErrorKind::range: return "range error";
    case ErrorKind::overflow: return "overflow";
    case ErrorKind::quadrature_failure: return "quadrature failure";
    case ErrorKind::infinite_divergence: return "infinite divergence";
    case ErrorKind::domain: return "domain error";
    case ErrorKind::infeasible: return "infeasible";
    case ErrorKind::no_convergence: return "no convergence";
    case ErrorKind::degenerate: return "degenerate distribution";
    case ErrorKind::numerical: return "numerical failure";
    case ErrorKind::parse: return "parse error";
  }
  return "unknown error";
}

}  // namespace gvm
