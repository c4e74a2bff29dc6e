// Copyright 2026 The nlsnet Authors
// SPDX-License-Identifier: Apache-2.0

#include "nlsnet/signal.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>

namespace nlsnet {

namespace {

constexpr double kPi = std::numbers::pi;

// Normalized RRC, Ts * h(t), as a function of x = t / Ts.
double rrc_normalized(double x, double rho) {
  if (x == 0.0) return 1.0 - rho + 4.0 * rho / kPi;
  const double four_rho_x = 4.0 * rho * x;
  const double denom = 1.0 - four_rho_x * four_rho_x;
  if (std::abs(denom) < 1e-9) {
    const double arg = kPi / (4.0 * rho);
    return rho / std::numbers::sqrt2 *
           ((1.0 + 2.0 / kPi) * std::sin(arg) + (1.0 - 2.0 / kPi) * std::cos(arg));
  }
  const double num = std::sin(kPi * x * (1.0 - rho)) + four_rho_x * std::cos(kPi * x * (1.0 + rho));
  return num / (kPi * x * denom);
}

}  // namespace

void PulseSpec::validate() const {
  if (!(symbol_period > 0.0) || !std::isfinite(symbol_period))
    throw std::invalid_argument("symbol_period must be positive");
  if (!(rolloff > 0.0 && rolloff <= 1.0)) throw std::invalid_argument("rolloff must lie in (0, 1]");
  if (samples_per_symbol < 2) throw std::invalid_argument("samples_per_symbol must be >= 2");
}

Constellation Constellation::qam16() {
  Constellation c;
  c.points.reserve(16);
  for (int re : {-3, -1, 1, 3})
    for (int im : {-3, -1, 1, 3}) c.points.emplace_back(re, im);
  return c;
}

std::vector<Complex> SymbolSequence::padded() const {
  std::vector<Complex> out(total_symbols(), Complex{0.0, 0.0});
  std::copy(symbols.begin(), symbols.end(), out.begin() + zero_pad_per_side);
  return out;
}

void ComplexSignal::validate() const {
  if (samples.size() < 1) throw std::invalid_argument("signal is empty");
  if (!(tau > 0.0) || !std::isfinite(tau)) throw std::invalid_argument("sample period must be positive");
  if (!all_finite(samples)) throw std::invalid_argument("signal contains non-finite samples");
}

double rrc_frequency_response(double frequency, const PulseSpec& pulse) {
  const double f = std::abs(frequency);
  const double ts = pulse.symbol_period;
  const double rho = pulse.rolloff;
  const double inner = (1.0 - rho) / (2.0 * ts);
  const double outer = (1.0 + rho) / (2.0 * ts);
  if (f <= inner) return 1.0;
  if (f <= outer) return std::cos(kPi * ts / (2.0 * rho) * (f - inner));
  return 0.0;
}

double rrc_impulse_response(double t, const PulseSpec& pulse) {
  return rrc_normalized(t / pulse.symbol_period, pulse.rolloff) / pulse.symbol_period;
}

SymbolSequence generate_symbols(std::size_t count, const Constellation& constellation, std::uint64_t seed,
                                int zero_pad_per_side, double power) {
  if (constellation.points.empty()) throw std::invalid_argument("constellation is empty");
  if (count < 1) throw std::invalid_argument("symbol count must be >= 1");
  if (zero_pad_per_side < 0) throw std::invalid_argument("zero padding must be nonnegative");
  if (!(power >= 0.0)) throw std::invalid_argument("power must be nonnegative");

  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, constellation.points.size() - 1);
  SymbolSequence seq;
  seq.symbols.reserve(count);
  for (std::size_t i = 0; i < count; ++i) seq.symbols.push_back(constellation.points[pick(rng)]);
  seq.power = power;
  seq.zero_pad_per_side = zero_pad_per_side;
  seq.seed = seed;
  return seq;
}

ComplexSignal modulate(const SymbolSequence& symbols, const PulseSpec& pulse) {
  pulse.validate();
  const std::vector<Complex> frame = symbols.padded();
  if (frame.empty()) throw std::invalid_argument("symbol sequence is empty");

  const long sps = pulse.samples_per_symbol;
  const long total = static_cast<long>(frame.size());
  const long n_samples = total * sps;
  const double tau = pulse.sample_period();

  // Offsets j = n - k*sps range over [-(total*sps), n_samples - sps]; a pulse
  // reaches at most `reach` samples from its center.
  const long reach = symbols.zero_pad_per_side > 0 ? symbols.zero_pad_per_side * sps : total * sps;
  std::vector<double> taps(static_cast<std::size_t>(2 * reach + 1));
  for (long j = -reach; j <= reach; ++j)
    taps[static_cast<std::size_t>(j + reach)] = rrc_impulse_response(static_cast<double>(j) * tau, pulse);

  ComplexSignal out;
  out.tau = tau;
  out.samples = ComplexVector::Zero(n_samples);
  const double amplitude = std::sqrt(symbols.power);
  for (long k = 1; k <= total; ++k) {
    const Complex a = frame[static_cast<std::size_t>(k - 1)];
    if (a == Complex{0.0, 0.0}) continue;
    const long center = k * sps;
    const long lo = std::max(0L, center - reach);
    const long hi = std::min(n_samples - 1, center + reach);
    for (long n = lo; n <= hi; ++n)
      out.samples[n] += a * taps[static_cast<std::size_t>(n - center + reach)];
  }
  out.samples *= amplitude;
  return out;
}

ComplexSignal add_awgn(const ComplexSignal& signal, const NoiseSpec& noise) {
  if (signal.size() < 1) throw std::invalid_argument("signal is empty");
  if (std::isnan(noise.snr) || !(noise.snr > 0.0)) throw std::invalid_argument("snr must be positive");
  if (noise.noiseless()) return signal;

  std::mt19937_64 rng(noise.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  ComplexVector draw(signal.size());
  for (Eigen::Index i = 0; i < draw.size(); ++i) {
    const double re = normal(rng);
    const double im = normal(rng);
    draw[i] = Complex{re, im};
  }
  const double draw_norm = std::sqrt(squared_norm(draw));
  const double scale = signal.norm() / (noise.snr * draw_norm);

  ComplexSignal out = signal;
  out.samples += scale * draw;
  return out;
}

ComplexSignal matched_filter_denoise(const ComplexSignal& signal, const PulseSpec& pulse) {
  pulse.validate();
  const Eigen::Index n = signal.size();
  if (n < 1) throw std::invalid_argument("signal is empty");

  ComplexVector taps = ComplexVector::Zero(n);
  const Eigen::Index lo = -(n / 2);
  double tap_sum = 0.0;
  for (Eigen::Index j = lo; j < lo + n; ++j) {
    const double h = rrc_impulse_response(static_cast<double>(j) * signal.tau, pulse);
    taps[(j + n) % n] = h;
    tap_sum += h;
  }

  Fft fft;
  const ComplexVector response = fft.forward(taps) / tap_sum;
  ComplexVector spectrum = fft.forward(signal.samples);
  spectrum.array() *= response.array();

  ComplexSignal out;
  out.tau = signal.tau;
  out.samples = fft.inverse(spectrum);
  return out;
}

}  // namespace nlsnet
