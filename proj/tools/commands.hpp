// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The gvm-spectral Authors

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "gvm/error.hpp"

namespace gvm::cli {

inline constexpr int exit_usage = 2;
inline constexpr int exit_internal = 70;

/// Process exit code for a library error kind.
int exit_code(ErrorKind kind);

/// Runs one `gvm` invocation; args excludes the program name. Output goes to
/// `out` unless --out names a file; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace gvm::cli
