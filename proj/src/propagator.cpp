// Copyright 2026 The nlsnet Authors
// SPDX-License-Identifier: Apache-2.0

#include "nlsnet/propagator.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "nlsnet/errors.hpp"

namespace nlsnet {

void FiberParams::validate() const {
  if (!std::isfinite(beta) || !std::isfinite(gamma)) throw std::invalid_argument("beta and gamma must be finite");
  if (!(length > 0.0) || !std::isfinite(length)) throw std::invalid_argument("fiber length must be positive");
}

SimGrid SimGrid::make(double length, int num_layers, Eigen::Index num_samples, double tau) {
  SimGrid g;
  g.num_layers = num_layers;
  g.num_samples = num_samples;
  g.step = length / num_layers;
  g.tau = tau;
  g.validate();
  return g;
}

void SimGrid::validate() const {
  if (num_layers < 1) throw std::invalid_argument("num_layers must be >= 1");
  if (num_samples < 1) throw std::invalid_argument("num_samples must be >= 1");
  if (!(step > 0.0) || !std::isfinite(step)) throw std::invalid_argument("step must be positive");
  if (!(tau > 0.0) || !std::isfinite(tau)) throw std::invalid_argument("tau must be positive");
}

LinearStep dispersion_multiplier(double beta, double distance, const SimGrid& grid) {
  const RealVector omega = angular_frequencies(grid.num_samples, grid.tau);
  LinearStep step;
  step.distance = distance;
  step.multiplier.resize(grid.num_samples);
  const double c = 0.5 * beta * distance;
  for (Eigen::Index k = 0; k < omega.size(); ++k) {
    const double phase = c * omega[k] * omega[k];
    step.multiplier[k] = Complex{std::cos(phase), std::sin(phase)};
  }
  return step;
}

ComplexVector build_fresnel_kernel(double eta, const SimGrid& grid) {
  if (eta == 0.0) throw std::invalid_argument("Fresnel kernel is singular at eta = 0");
  const Eigen::Index half = (grid.num_samples + 1) / 2;
  const Complex prefactor = std::sqrt(Complex{0.0, 1.0} / (2.0 * std::numbers::pi * eta)) * grid.tau;
  ComplexVector kernel(2 * half + 1);
  for (Eigen::Index k = -half; k <= half; ++k) {
    const double t = static_cast<double>(k) * grid.tau;
    const double phase = -t * t / (2.0 * eta);
    kernel[k + half] = prefactor * Complex{std::cos(phase), std::sin(phase)};
  }
  return kernel;
}

ComplexSignal nonlinear_step(const ComplexSignal& signal, double gamma, double distance) {
  ComplexSignal out = signal;
  const double eta = gamma * distance;
  for (Eigen::Index n = 0; n < out.samples.size(); ++n) {
    const double phase = eta * std::norm(out.samples[n]);
    out.samples[n] *= Complex{std::cos(phase), std::sin(phase)};
  }
  return out;
}

ComplexSignal linear_step(const ComplexSignal& signal, const LinearStep& step) {
  if (step.multiplier.size() != signal.size())
    throw std::invalid_argument("linear step length " + std::to_string(step.multiplier.size()) +
                                " does not match signal length " + std::to_string(signal.size()));
  Fft fft;
  ComplexVector spectrum = fft.forward(signal.samples);
  spectrum.array() *= step.multiplier.array();
  ComplexSignal out;
  out.tau = signal.tau;
  out.samples = fft.inverse(spectrum);
  return out;
}

ComplexSignal fresnel_linear_step(const ComplexSignal& signal, double beta, double distance, const SimGrid& grid) {
  const double eta = beta * distance;
  if (eta == 0.0) return signal;
  if (signal.size() != grid.num_samples) throw std::invalid_argument("signal length does not match grid");

  const ComplexVector kernel = build_fresnel_kernel(eta, grid);
  const Eigen::Index n = signal.size();
  const Eigen::Index half = (kernel.size() - 1) / 2;
  // Linear convolution out[n] = sum_l K[n - l] A[l] through one zero-padded FFT.
  Eigen::Index len = 1;
  while (len < n + kernel.size()) len <<= 1;
  ComplexVector a = ComplexVector::Zero(len);
  ComplexVector k = ComplexVector::Zero(len);
  a.head(n) = signal.samples;
  k.head(kernel.size()) = kernel;

  Fft fft;
  ComplexVector prod = fft.forward(a);
  prod.array() *= fft.forward(k).array();
  const ComplexVector full = fft.inverse(prod);

  ComplexSignal out;
  out.tau = signal.tau;
  out.samples = full.segment(half, n);
  return out;
}

namespace {

void check_layer(const ComplexVector& v, int layer) {
  if (!all_finite(v)) throw NumericalError("non-finite sample during propagation", layer);
}

void apply_nonlinearity(ComplexVector& v, double eta) {
  for (Eigen::Index n = 0; n < v.size(); ++n) {
    const double phase = eta * std::norm(v[n]);
    v[n] *= Complex{std::cos(phase), std::sin(phase)};
  }
}

}  // namespace

ComplexSignal propagate(const ComplexSignal& signal, const FiberParams& params, const SimGrid& grid,
                        LinearBackend backend) {
  grid.validate();
  if (signal.size() != grid.num_samples) throw std::invalid_argument("signal length does not match grid");
  if (backend == LinearBackend::fresnel) return propagate_unfused(signal, params, grid, backend);

  const ComplexVector half = dispersion_multiplier(params.beta, 0.5 * grid.step, grid).multiplier;
  const ComplexVector full = dispersion_multiplier(params.beta, grid.step, grid).multiplier;
  const double eta = params.gamma * grid.step;

  Fft fft;
  ComplexVector spectrum(signal.size());
  ComplexVector field(signal.size());
  fft.forward(spectrum, signal.samples);
  spectrum.array() *= half.array();
  for (int m = 0; m < grid.num_layers; ++m) {
    fft.inverse(field, spectrum);
    apply_nonlinearity(field, eta);
    check_layer(field, m);
    fft.forward(spectrum, field);
    spectrum.array() *= (m + 1 < grid.num_layers ? full : half).array();
  }
  ComplexSignal out;
  out.tau = signal.tau;
  out.samples.resize(signal.size());
  fft.inverse(out.samples, spectrum);
  check_layer(out.samples, grid.num_layers - 1);
  return out;
}

ComplexSignal propagate_unfused(const ComplexSignal& signal, const FiberParams& params, const SimGrid& grid,
                                LinearBackend backend) {
  grid.validate();
  if (signal.size() != grid.num_samples) throw std::invalid_argument("signal length does not match grid");

  const double half_step = 0.5 * grid.step;
  const LinearStep half = dispersion_multiplier(params.beta, half_step, grid);
  auto disperse = [&](const ComplexSignal& s) {
    return backend == LinearBackend::spectral ? linear_step(s, half)
                                              : fresnel_linear_step(s, params.beta, half_step, grid);
  };

  ComplexSignal field = signal;
  for (int m = 0; m < grid.num_layers; ++m) {
    field = disperse(nonlinear_step(disperse(field), params.gamma, grid.step));
    check_layer(field.samples, m);
  }
  return field;
}

std::pair<ComplexSignal, ComplexSignal> generate_ground_truth(const SymbolSequence& symbols, const PulseSpec& pulse,
                                                              const FiberParams& params, int num_layers,
                                                              int oversample, int layer_multiple) {
  if (oversample < 1) throw std::invalid_argument("oversample must be >= 1");
  if (layer_multiple < 1) throw std::invalid_argument("layer_multiple must be >= 1");
  params.validate();

  ComplexSignal input = modulate(symbols, pulse);
  if (oversample == 1) {
    const SimGrid grid = SimGrid::make(params.length, num_layers * layer_multiple, input.size(), input.tau);
    ComplexSignal output = propagate(input, params, grid);
    return {std::move(input), std::move(output)};
  }

  PulseSpec fine_pulse = pulse;
  fine_pulse.samples_per_symbol = pulse.samples_per_symbol * oversample;
  const ComplexSignal fine_input = modulate(symbols, fine_pulse);
  const SimGrid grid = SimGrid::make(params.length, num_layers * layer_multiple, fine_input.size(), fine_input.tau);
  const ComplexSignal fine_output = propagate(fine_input, params, grid);

  ComplexSignal output;
  output.tau = input.tau;
  output.samples.resize(input.size());
  for (Eigen::Index n = 0; n < input.size(); ++n) output.samples[n] = fine_output.samples[n * oversample];
  return {std::move(input), std::move(output)};
}

}  // namespace nlsnet
