// Copyright 2026 The nlsnet Authors
// SPDX-License-Identifier: Apache-2.0

#include "nlsnet/dataset.hpp"

#include <cmath>
#include <stdexcept>

namespace nlsnet {

void DataSpec::validate() const {
  pulse.validate();
  truth.validate();
  if (num_symbols < 1) throw std::invalid_argument("num_symbols must be >= 1");
  if (zero_pad_per_side < 0) throw std::invalid_argument("zero_pad_per_side must be >= 0");
  if (!(power > 0.0)) throw std::invalid_argument("power must be positive");
  if (model_layers < 1 || oracle_layers < 1) throw std::invalid_argument("layer counts must be >= 1");
  if (oracle_samples_per_symbol < pulse.samples_per_symbol ||
      oracle_samples_per_symbol % pulse.samples_per_symbol != 0)
    throw std::invalid_argument("oracle sampling rate must be a multiple of the model sampling rate");
  if (std::isnan(noise.snr) || !(noise.snr > 0.0)) throw std::invalid_argument("snr must be positive");
}

Dataset make_dataset(const DataSpec& spec) {
  spec.validate();
  const SymbolSequence symbols =
      generate_symbols(spec.num_symbols, Constellation::qam16(), spec.seed, spec.zero_pad_per_side, spec.power);
  auto [input, target] =
      generate_ground_truth(symbols, spec.pulse, spec.truth, spec.oracle_layers,
                            spec.oracle_samples_per_symbol / spec.pulse.samples_per_symbol, 1);

  if (!spec.noise.noiseless()) {
    input = add_awgn(input, spec.noise);
    target = add_awgn(target, NoiseSpec{spec.noise.snr, spec.noise.seed + 1});
  }
  if (spec.denoise) {
    input = matched_filter_denoise(input, spec.pulse);
    target = matched_filter_denoise(target, spec.pulse);
  }

  Dataset d;
  d.grid = SimGrid::make(spec.truth.length, spec.model_layers, input.size(), input.tau);
  d.input = std::move(input);
  d.target = std::move(target);
  d.truth = spec.truth;
  return d;
}

}  // namespace nlsnet
