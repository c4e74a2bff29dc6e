// Copyright 2026 The nlsnet Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>

#include "nlsnet/propagator.hpp"

namespace nlsnet {

/// Everything needed to synthesize one (input, target) pair and the model grid
/// it is fitted on. The oracle simulates the link at its own depth and sampling
/// rate; the model grid uses `model_layers` at the pulse's sampling rate.
struct DataSpec {
  PulseSpec pulse;
  std::size_t num_symbols = 200;
  int zero_pad_per_side = 70;
  double power = 0.01;  // W
  std::uint64_t seed = 1;
  FiberParams truth;
  int model_layers = 100;
  int oracle_layers = 100;
  int oracle_samples_per_symbol = 64;  // multiple of pulse.samples_per_symbol
  NoiseSpec noise;                     // applied independently to input and target
  bool denoise = false;                // matched-filter both signals after noise

  void validate() const;
};

struct Dataset {
  ComplexSignal input;
  ComplexSignal target;
  SimGrid grid;
  FiberParams truth;
};

Dataset make_dataset(const DataSpec& spec);

}  // namespace nlsnet
