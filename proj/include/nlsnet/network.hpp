// Copyright 2026 The nlsnet Authors
// SPDX-License-Identifier: Apache-2.0

// The split-step solver read as an M-layer complex-valued convolutional
// network whose kernels are frozen functions of two trainable scalars
// (beta, gamma). Provides the forward pass with a tape, the normalized
// squared-error loss, and exact reverse-mode gradients.

#pragma once

#include <vector>

#include "nlsnet/propagator.hpp"

namespace nlsnet {

struct NetworkParams {
  double beta = -21.6;
  double gamma = 1.6;
  SimGrid grid;

  FiberParams fiber() const { return {beta, gamma, grid.length()}; }
};

/// Activations recorded by forward(). layer_inputs[m] is the field entering
/// the m-th nonlinearity and spectra[m] its DFT; output_spectrum is the DFT of
/// the network output.
struct ForwardTape {
  std::vector<ComplexVector> layer_inputs;
  std::vector<ComplexVector> spectra;
  ComplexVector output_spectrum;
  double beta = 0.0;
  double gamma = 0.0;
};

struct LossValue {
  double value = 0.0;
  ComplexVector residual;  // output - target
  double target_norm_sq = 0.0;
};

struct Gradient {
  double d_beta = 0.0;
  double d_gamma = 0.0;
};

struct GradCheck {
  double rel_err_beta = 0.0;
  double rel_err_gamma = 0.0;
  Gradient analytic;
  Gradient numeric;
};

std::pair<ComplexSignal, ForwardTape> forward(const NetworkParams& params, const ComplexSignal& input);

/// The kernel form: W_0 = sqrt(gamma zeta) K(beta zeta / 2), W_1..W_{M-1} = K(beta zeta),
/// W_M = K(beta zeta / 2) / sqrt(gamma zeta), activation sigma(w) = w exp(i |w|^2).
/// The square root is the principal complex root, so for gamma < 0 the layers
/// apply the nonlinearity with |gamma|. Requires gamma != 0.
ComplexSignal forward_kernel_form(const NetworkParams& params, const ComplexSignal& input);

/// J = ||H(beta, gamma) input - target||^2 / ||target||^2.
LossValue loss(const NetworkParams& params, const ComplexSignal& input, const ComplexSignal& target);

/// dJ/dbeta and dJ/dgamma for the residual of a forward pass recorded in `tape`.
Gradient backward(const ForwardTape& tape, const NetworkParams& params, const ComplexVector& residual,
                  double target_norm_sq);

struct LossAndGradient {
  LossValue loss;
  Gradient gradient;
};

LossAndGradient loss_and_gradient(const NetworkParams& params, const ComplexSignal& input,
                                  const ComplexSignal& target);

/// Compares backward() to central differences with step rel_step * |param|
/// (rel_step when the parameter is zero).
GradCheck grad_check(const NetworkParams& params, const ComplexSignal& input, const ComplexSignal& target,
                     double rel_step = 1e-4);

}  // namespace nlsnet
