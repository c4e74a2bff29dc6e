// Copyright 2026 The nlsnet Authors
// SPDX-License-Identifier: Apache-2.0

// Split-step Fourier solver for dA/dz = -i beta/2 A_tt + i gamma |A|^2 A using
// symmetric (Strang) splitting on a periodic time grid.

#pragma once

#include <utility>

#include "nlsnet/signal.hpp"

namespace nlsnet {

struct FiberParams {
  double beta = -21.6;   // ps^2/km
  double gamma = 1.6;    // 1/(W km)
  double length = 80.0;  // km

  void validate() const;
};

/// Discretization of [0, Z] x [0, T]: num_layers steps of length `step`,
/// num_samples samples spaced by `tau`.
struct SimGrid {
  int num_layers = 1;
  Eigen::Index num_samples = 1;
  double step = 1.0;  // km
  double tau = 1.0;   // ps

  static SimGrid make(double length, int num_layers, Eigen::Index num_samples, double tau);
  double length() const { return step * num_layers; }
  void validate() const;
};

/// Frequency response exp(i beta d omega^2 / 2) of dispersion over distance d.
struct LinearStep {
  ComplexVector multiplier;
  double distance = 0.0;
};

enum class LinearBackend {
  spectral,  // exact multiplier on the periodic grid
  fresnel,   // sampled time-domain chirp kernel, linear convolution
};

LinearStep dispersion_multiplier(double beta, double distance, const SimGrid& grid);

/// Samples of sqrt(i / (2 pi eta)) exp(-i (k tau)^2 / (2 eta)) for
/// k = -ceil(N/2) .. ceil(N/2), multiplied by the quadrature weight tau.
/// Element 0 corresponds to k = -ceil(N/2).
ComplexVector build_fresnel_kernel(double eta, const SimGrid& grid);

ComplexSignal nonlinear_step(const ComplexSignal& signal, double gamma, double distance);

/// Throws std::invalid_argument when the multiplier length differs from the signal.
ComplexSignal linear_step(const ComplexSignal& signal, const LinearStep& step);

/// Dispersion over distance `distance` via zero-extended linear convolution with
/// the Fresnel kernel. Zero distance is the identity. The sampled chirp is
/// resolved only when |beta * distance| > N tau^2 / (2 pi); below that it aliases.
ComplexSignal fresnel_linear_step(const ComplexSignal& signal, double beta, double distance, const SimGrid& grid);

/// M Strang steps. Interior half steps are fused into full steps; the result
/// equals propagate_unfused to rounding. Throws NumericalError on blow-up.
ComplexSignal propagate(const ComplexSignal& signal, const FiberParams& params, const SimGrid& grid,
                        LinearBackend backend = LinearBackend::spectral);

/// Literal composition (half linear, nonlinear, half linear)^M.
ComplexSignal propagate_unfused(const ComplexSignal& signal, const FiberParams& params, const SimGrid& grid,
                                LinearBackend backend = LinearBackend::spectral);

/// Transmitted and received samples for a symbol sequence. The received signal
/// is simulated with `num_layers * layer_multiple` steps at `oversample` times
/// the pulse's sampling rate, then decimated back to the pulse's rate.
std::pair<ComplexSignal, ComplexSignal> generate_ground_truth(const SymbolSequence& symbols, const PulseSpec& pulse,
                                                              const FiberParams& params, int num_layers,
                                                              int oversample = 1, int layer_multiple = 1);

}  // namespace nlsnet
