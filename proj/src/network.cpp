// Copyright 2026 The nlsnet Authors
// SPDX-License-Identifier: Apache-2.0

#include "nlsnet/network.hpp"

#include <cmath>
#include <stdexcept>

#include "nlsnet/errors.hpp"

namespace nlsnet {

namespace {

void check_input(const NetworkParams& params, const ComplexSignal& input) {
  params.grid.validate();
  if (input.size() != params.grid.num_samples)
    throw std::invalid_argument("input length " + std::to_string(input.size()) + " does not match grid width " +
                                std::to_string(params.grid.num_samples));
  if (!std::isfinite(params.beta) || !std::isfinite(params.gamma))
    throw std::invalid_argument("beta and gamma must be finite");
}

Complex unit_phase(double phase) { return {std::cos(phase), std::sin(phase)}; }

// (1/N) sum_k Re(conj(G_k) * i c omega_k^2 Y_k) = -(c/N) sum_k omega_k^2 Im(conj(G_k) Y_k)
double dispersion_sensitivity(const ComplexVector& adjoint_spectrum, const ComplexVector& output_spectrum,
                              const RealVector& omega_sq, double c) {
  RealVector terms(omega_sq.size());
  for (Eigen::Index k = 0; k < terms.size(); ++k)
    terms[k] = omega_sq[k] * (std::conj(adjoint_spectrum[k]) * output_spectrum[k]).imag();
  return -c / static_cast<double>(terms.size()) * pairwise_sum(terms);
}

}  // namespace

std::pair<ComplexSignal, ForwardTape> forward(const NetworkParams& params, const ComplexSignal& input) {
  check_input(params, input);
  const SimGrid& grid = params.grid;
  const ComplexVector half = dispersion_multiplier(params.beta, 0.5 * grid.step, grid).multiplier;
  const ComplexVector full = dispersion_multiplier(params.beta, grid.step, grid).multiplier;
  const double eta = params.gamma * grid.step;

  ForwardTape tape;
  tape.beta = params.beta;
  tape.gamma = params.gamma;
  tape.layer_inputs.reserve(static_cast<std::size_t>(grid.num_layers));
  tape.spectra.reserve(static_cast<std::size_t>(grid.num_layers));

  Fft fft;
  ComplexVector spectrum(input.size());
  ComplexVector field(input.size());
  fft.forward(spectrum, input.samples);
  spectrum.array() *= half.array();
  for (int m = 0; m < grid.num_layers; ++m) {
    fft.inverse(field, spectrum);
    tape.spectra.push_back(spectrum);
    tape.layer_inputs.push_back(field);
    for (Eigen::Index n = 0; n < field.size(); ++n) field[n] *= unit_phase(eta * std::norm(field[n]));
    if (!all_finite(field)) throw NumericalError("non-finite activation", m);
    fft.forward(spectrum, field);
    spectrum.array() *= (m + 1 < grid.num_layers ? full : half).array();
  }
  ComplexSignal out;
  out.tau = input.tau;
  out.samples.resize(input.size());
  fft.inverse(out.samples, spectrum);
  if (!all_finite(out.samples)) throw NumericalError("non-finite network output", grid.num_layers - 1);
  tape.output_spectrum = std::move(spectrum);
  return {std::move(out), std::move(tape)};
}

ComplexSignal forward_kernel_form(const NetworkParams& params, const ComplexSignal& input) {
  check_input(params, input);
  const SimGrid& grid = params.grid;
  const Complex scale = std::sqrt(Complex{params.gamma * grid.step, 0.0});
  if (scale == Complex{0.0, 0.0}) throw std::invalid_argument("kernel form requires gamma != 0");

  const ComplexVector half = dispersion_multiplier(params.beta, 0.5 * grid.step, grid).multiplier;
  const ComplexVector full = dispersion_multiplier(params.beta, grid.step, grid).multiplier;

  Fft fft;
  ComplexVector spectrum = fft.forward(input.samples);
  spectrum.array() *= scale * half.array();
  ComplexVector field(input.size());
  for (int m = 0; m < grid.num_layers; ++m) {
    fft.inverse(field, spectrum);
    for (Eigen::Index n = 0; n < field.size(); ++n) field[n] *= unit_phase(std::norm(field[n]));
    fft.forward(spectrum, field);
    if (m + 1 < grid.num_layers)
      spectrum.array() *= full.array();
    else
      spectrum.array() *= half.array() / scale;
  }
  ComplexSignal out;
  out.tau = input.tau;
  out.samples = fft.inverse(spectrum);
  return out;
}

LossValue loss(const NetworkParams& params, const ComplexSignal& input, const ComplexSignal& target) {
  if (target.size() != params.grid.num_samples) throw std::invalid_argument("target length does not match grid");
  LossValue result;
  result.target_norm_sq = squared_norm(target.samples);
  if (!(result.target_norm_sq > 0.0)) throw std::invalid_argument("target has zero norm");
  const ComplexSignal output = propagate(input, params.fiber(), params.grid);
  result.residual = output.samples - target.samples;
  result.value = squared_norm(result.residual) / result.target_norm_sq;
  return result;
}

Gradient backward(const ForwardTape& tape, const NetworkParams& params, const ComplexVector& residual,
                  double target_norm_sq) {
  const SimGrid& grid = params.grid;
  const auto layers = static_cast<std::size_t>(grid.num_layers);
  if (tape.layer_inputs.size() != layers || tape.spectra.size() != layers)
    throw std::invalid_argument("tape depth does not match the network");
  if (tape.beta != params.beta || tape.gamma != params.gamma)
    throw std::invalid_argument("tape was recorded with different parameters");
  if (residual.size() != grid.num_samples || tape.output_spectrum.size() != grid.num_samples)
    throw std::invalid_argument("residual length does not match the network");
  if (!(target_norm_sq > 0.0)) throw std::invalid_argument("target norm must be positive");

  const RealVector omega_sq = angular_frequencies(grid.num_samples, grid.tau).array().square();
  const ComplexVector half = dispersion_multiplier(params.beta, 0.5 * grid.step, grid).multiplier;
  const ComplexVector full = dispersion_multiplier(params.beta, grid.step, grid).multiplier;
  const double eta = params.gamma * grid.step;

  RealVector beta_terms(grid.num_layers + 1);
  RealVector gamma_terms(grid.num_layers);

  Fft fft;
  // dJ/d(output) in the convention g = dJ/dRe + i dJ/dIm.
  ComplexVector adjoint = (2.0 / target_norm_sq) * residual;
  ComplexVector adjoint_spectrum = fft.forward(adjoint);
  beta_terms[grid.num_layers] =
      dispersion_sensitivity(adjoint_spectrum, tape.output_spectrum, omega_sq, 0.25 * grid.step);
  adjoint_spectrum.array() *= half.array().conjugate();
  fft.inverse(adjoint, adjoint_spectrum);

  RealVector gamma_local(grid.num_samples);
  for (int m = grid.num_layers - 1; m >= 0; --m) {
    const ComplexVector& a = tape.layer_inputs[static_cast<std::size_t>(m)];
    for (Eigen::Index n = 0; n < a.size(); ++n) {
      const double power = std::norm(a[n]);
      const Complex rot = unit_phase(eta * power);
      const double cross = (std::conj(adjoint[n]) * (a[n] * rot)).imag();
      gamma_local[n] = -grid.step * power * cross;
      adjoint[n] = adjoint[n] * std::conj(rot) - 2.0 * eta * cross * a[n];
    }
    gamma_terms[m] = pairwise_sum(gamma_local);

    fft.forward(adjoint_spectrum, adjoint);
    const double distance = m == 0 ? 0.5 * grid.step : grid.step;
    beta_terms[m] = dispersion_sensitivity(adjoint_spectrum, tape.spectra[static_cast<std::size_t>(m)], omega_sq,
                                           0.5 * distance);
    if (m > 0) {
      adjoint_spectrum.array() *= full.array().conjugate();
      fft.inverse(adjoint, adjoint_spectrum);
    }
  }
  return {pairwise_sum(beta_terms), pairwise_sum(gamma_terms)};
}

LossAndGradient loss_and_gradient(const NetworkParams& params, const ComplexSignal& input,
                                  const ComplexSignal& target) {
  if (target.size() != params.grid.num_samples) throw std::invalid_argument("target length does not match grid");
  LossAndGradient out;
  out.loss.target_norm_sq = squared_norm(target.samples);
  if (!(out.loss.target_norm_sq > 0.0)) throw std::invalid_argument("target has zero norm");
  auto [output, tape] = forward(params, input);
  out.loss.residual = output.samples - target.samples;
  out.loss.value = squared_norm(out.loss.residual) / out.loss.target_norm_sq;
  out.gradient = backward(tape, params, out.loss.residual, out.loss.target_norm_sq);
  return out;
}

GradCheck grad_check(const NetworkParams& params, const ComplexSignal& input, const ComplexSignal& target,
                     double rel_step) {
  if (!(rel_step > 0.0)) throw std::invalid_argument("rel_step must be positive");
  GradCheck check;
  check.analytic = loss_and_gradient(params, input, target).gradient;

  auto central = [&](double NetworkParams::*member) {
    const double x = params.*member;
    const double h = x != 0.0 ? rel_step * std::abs(x) : rel_step;
    NetworkParams plus = params;
    NetworkParams minus = params;
    plus.*member = x + h;
    minus.*member = x - h;
    return (loss(plus, input, target).value - loss(minus, input, target).value) / (2.0 * h);
  };
  check.numeric.d_beta = central(&NetworkParams::beta);
  check.numeric.d_gamma = central(&NetworkParams::gamma);

  auto rel = [](double a, double b) { return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-30}); };
  check.rel_err_beta = rel(check.analytic.d_beta, check.numeric.d_beta);
  check.rel_err_gamma = rel(check.analytic.d_gamma, check.numeric.d_gamma);
  return check;
}

}  // namespace nlsnet
