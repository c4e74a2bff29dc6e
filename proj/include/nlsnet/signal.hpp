// Copyright 2026 The nlsnet Authors
// SPDX-License-Identifier: Apache-2.0

// Synthetic transmitter signals: root-raised-cosine pulse shaping of random
// constellation symbols, additive white Gaussian noise, and matched filtering.

#pragma once

#include <cstdint>
#include <limits>
#include <vector>

#include "nlsnet/fft.hpp"

namespace nlsnet {

struct PulseSpec {
  double symbol_period = 10.0;  // ps; 100 GBaud
  double rolloff = 0.1;
  int samples_per_symbol = 64;

  double sample_period() const { return symbol_period / samples_per_symbol; }
  void validate() const;
};

struct Constellation {
  std::vector<Complex> points;

  /// {±(2m+1) ± i(2n+1)}, 0 <= m,n <= 1.
  static Constellation qam16();
};

/// Random symbols a_1..a_Ns framed by `zero_pad_per_side` zero symbols on each side.
struct SymbolSequence {
  std::vector<Complex> symbols;
  double power = 1.0;  // W
  int zero_pad_per_side = 0;
  std::uint64_t seed = 0;

  /// Full frame including the zero padding.
  std::vector<Complex> padded() const;
  std::size_t total_symbols() const { return symbols.size() + 2 * static_cast<std::size_t>(zero_pad_per_side); }
};

/// Uniformly sampled complex waveform; |A|^2 is power in W.
struct ComplexSignal {
  ComplexVector samples;
  double tau = 1.0;  // ps

  Eigen::Index size() const { return samples.size(); }
  double norm() const { return std::sqrt(squared_norm(samples)); }
  /// Throws std::invalid_argument when empty, tau <= 0 or any sample is non-finite.
  void validate() const;
};

struct NoiseSpec {
  double snr = std::numeric_limits<double>::infinity();  // ||signal|| / ||noise||
  std::uint64_t seed = 0;

  bool noiseless() const { return std::isinf(snr) && snr > 0; }
};

double rrc_frequency_response(double frequency, const PulseSpec& pulse);

/// Inverse Fourier transform of rrc_frequency_response (units 1/ps), with the
/// removable singularities at t = 0 and |t| = Ts/(4 rho) replaced by their limits.
double rrc_impulse_response(double t, const PulseSpec& pulse);

SymbolSequence generate_symbols(std::size_t count, const Constellation& constellation, std::uint64_t seed,
                                int zero_pad_per_side = 0, double power = 1.0);

/// samples[n] = sqrt(P) * sum_k a_k h(n tau - k Ts), k = 1..total_symbols, over
/// N = total_symbols * sps samples. Each pulse is truncated to
/// ±zero_pad_per_side symbol periods; with no padding the pulse is not truncated.
ComplexSignal modulate(const SymbolSequence& symbols, const PulseSpec& pulse);

/// Adds circular white Gaussian noise scaled so that ||signal|| / ||noise|| == snr.
ComplexSignal add_awgn(const ComplexSignal& signal, const NoiseSpec& noise);

/// Circular convolution with the sampled pulse taken over one full period of the
/// signal, normalized to unit gain at DC.
ComplexSignal matched_filter_denoise(const ComplexSignal& signal, const PulseSpec& pulse);

}  // namespace nlsnet
