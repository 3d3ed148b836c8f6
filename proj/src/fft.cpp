// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The gvm-spectral Authors

#include "fft.hpp"

#include <memory>
#include <mutex>

#include <fftw3.h>

namespace gvm::detail {

namespace {

// fftw planning is not thread-safe; execution is
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

struct PlanDeleter {
  void operator()(fftw_plan_s* plan) const {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(plan);
  }
};

}  // namespace

std::vector<std::complex<double>> dft(const std::vector<std::complex<double>>& in, int sign) {
  std::vector<std::complex<double>> buffer(in);
  std::vector<std::complex<double>> out(in.size());
  if (in.empty()) return out;
  std::unique_ptr<fftw_plan_s, PlanDeleter> plan;
  {
    std::lock_guard lock(planner_mutex());
    plan.reset(fftw_plan_dft_1d(static_cast<int>(in.size()),
                                reinterpret_cast<fftw_complex*>(buffer.data()),
                                reinterpret_cast<fftw_complex*>(out.data()),
                                sign < 0 ? FFTW_FORWARD : FFTW_BACKWARD, FFTW_ESTIMATE));
  }
  fftw_execute(plan.get());
  return out;
}

}  // namespace gvm::detail
