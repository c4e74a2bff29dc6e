// Copyright 2026 The nlsnet Authors
// SPDX-License-Identifier: Apache-2.0

#include "nlsnet/attenuation.hpp"

#include <cmath>
#include <stdexcept>

namespace nlsnet {

AttenuationEstimate estimate_alpha(const ComplexSignal& input, const ComplexSignal& output, double length) {
  if (input.size() < 1 || output.size() < 1) throw std::invalid_argument("signals must be non-empty");
  if (!(length > 0.0) || !std::isfinite(length)) throw std::invalid_argument("fiber length must be positive");

  AttenuationEstimate est;
  est.length = length;
  est.norm_in = std::sqrt(input.tau * squared_norm(input.samples));
  est.norm_out = std::sqrt(output.tau * squared_norm(output.samples));
  if (!(est.norm_in > 0.0) || !(est.norm_out > 0.0)) throw std::invalid_argument("signal norms must be positive");
  est.alpha = 2.0 / length * std::log(est.norm_in / est.norm_out);
  return est;
}

}  // namespace nlsnet
