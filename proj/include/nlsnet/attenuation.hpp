// Copyright 2026 The nlsnet Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "nlsnet/signal.hpp"

namespace nlsnet {

struct AttenuationEstimate {
  double alpha = 0.0;     // 1/km
  double norm_in = 0.0;   // sqrt(tau * sum |A_in|^2)
  double norm_out = 0.0;
  double length = 0.0;    // km
};

/// Closed-form loss coefficient from energy decay: dispersion and Kerr terms
/// conserve ||A||, so ||A_out||^2 = ||A_in||^2 exp(-alpha Z) and
/// alpha = (2 / Z) ln(||A_in|| / ||A_out||).
AttenuationEstimate estimate_alpha(const ComplexSignal& input, const ComplexSignal& output, double length);

}  // namespace nlsnet
