// Copyright 2026 The nlsnet Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <complex>
#include <numbers>

#include "nlsnet/dataset.hpp"
#include "nlsnet/network.hpp"

namespace nlsnet::testing {

inline double rel_l2(const ComplexVector& a, const ComplexVector& b) {
  return std::sqrt((a - b).squaredNorm() / b.squaredNorm());
}

// Small problem used throughout: 16 sps, 50 symbols, 20 layers, inverse crime.
inline DataSpec desk_spec() {
  DataSpec d;
  d.pulse.samples_per_symbol = 16;
  d.num_symbols = 50;
  d.zero_pad_per_side = 70;
  d.power = 0.01;
  d.seed = 1;
  d.model_layers = 20;
  d.oracle_layers = 20;
  d.oracle_samples_per_symbol = 16;
  return d;
}

inline const Dataset& desk_data() {
  static const Dataset d = make_dataset(desk_spec());
  return d;
}

// exp(-t^2 / (2 t0^2)) sampled on n points centred in the window.
inline ComplexSignal gaussian(Eigen::Index n, double tau, double t0, double amplitude = 1.0) {
  ComplexSignal s;
  s.tau = tau;
  s.samples.resize(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    const double t = (static_cast<double>(k) - static_cast<double>(n / 2)) * tau;
    s.samples[k] = amplitude * std::exp(-t * t / (2.0 * t0 * t0));
  }
  return s;
}

// Closed-form solution of dA/dz = -i beta/2 A_tt for the Gaussian above.
inline ComplexSignal dispersed_gaussian(Eigen::Index n, double tau, double t0, double beta, double z,
                                        double amplitude = 1.0) {
  using C = std::complex<double>;
  const C q = C(t0 * t0, 0.0) - C(0.0, beta * z);
  ComplexSignal s;
  s.tau = tau;
  s.samples.resize(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    const double t = (static_cast<double>(k) - static_cast<double>(n / 2)) * tau;
    s.samples[k] = amplitude * t0 / std::sqrt(q) * std::exp(-t * t / (2.0 * q));
  }
  return s;
}

}  // namespace nlsnet::testing
