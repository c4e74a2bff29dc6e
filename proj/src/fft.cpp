// Copyright 2026 The nlsnet Authors
// SPDX-License-Identifier: Apache-2.0

#include "nlsnet/fft.hpp"

#include <fftw3.h>

#include <mutex>
#include <stdexcept>

namespace nlsnet {

namespace {

// The FFTW planner is not reentrant; execution of an existing plan is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

fftw_complex* as_fftw(Complex* p) { return reinterpret_cast<fftw_complex*>(p); }
fftw_complex* as_fftw(const Complex* p) { return reinterpret_cast<fftw_complex*>(const_cast<Complex*>(p)); }

}  // namespace

Fft::~Fft() {
  std::lock_guard<std::mutex> lock(planner_mutex());
  for (const Plan& p : plans_) fftw_destroy_plan(static_cast<fftw_plan>(p.handle));
}

void* Fft::plan_for(Eigen::Index size, int sign) {
  for (const Plan& p : plans_)
    if (p.size == size && p.sign == sign) return p.handle;
  std::lock_guard<std::mutex> lock(planner_mutex());
  // FFTW_ESTIMATE never touches the arrays, so scratch buffers suffice for planning.
  std::vector<Complex> in(static_cast<std::size_t>(size)), out(static_cast<std::size_t>(size));
  fftw_plan plan = fftw_plan_dft_1d(static_cast<int>(size), as_fftw(in.data()), as_fftw(out.data()), sign,
                                    FFTW_ESTIMATE | FFTW_UNALIGNED);
  if (plan == nullptr) throw std::runtime_error("FFTW planning failed");
  plans_.push_back({size, sign, plan});
  return plan;
}

void Fft::forward(ComplexVector& dst, const ComplexVector& src) {
  dst.resize(src.size());
  if (src.size() == 0) return;
  auto plan = static_cast<fftw_plan>(plan_for(src.size(), FFTW_FORWARD));
  if (dst.data() == src.data()) {
    ComplexVector tmp = src;
    fftw_execute_dft(plan, as_fftw(tmp.data()), as_fftw(dst.data()));
  } else {
    fftw_execute_dft(plan, as_fftw(src.data()), as_fftw(dst.data()));
  }
}

void Fft::inverse(ComplexVector& dst, const ComplexVector& src) {
  dst.resize(src.size());
  if (src.size() == 0) return;
  auto plan = static_cast<fftw_plan>(plan_for(src.size(), FFTW_BACKWARD));
  if (dst.data() == src.data()) {
    ComplexVector tmp = src;
    fftw_execute_dft(plan, as_fftw(tmp.data()), as_fftw(dst.data()));
  } else {
    fftw_execute_dft(plan, as_fftw(src.data()), as_fftw(dst.data()));
  }
  dst /= static_cast<double>(src.size());
}

}  // namespace nlsnet
