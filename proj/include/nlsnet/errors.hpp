// Copyright 2026 The nlsnet Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace nlsnet {

/// Raised when a propagation produces a non-finite sample. `layer()` is the
/// zero-based layer at which the blow-up was detected, or -1 when the check
/// happened outside the layer loop.
class NumericalError : public std::runtime_error {
 public:
  NumericalError(const std::string& what, int layer = -1)
      : std::runtime_error(layer >= 0 ? what + " (layer " + std::to_string(layer) + ")" : what),
        layer_(layer) {}

  int layer() const noexcept { return layer_; }

 private:
  int layer_;
};

/// A configuration value failed validation. `path()` is the dotted field path,
/// e.g. "pulse.rolloff_rho".
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string path, const std::string& message)
      : std::runtime_error(path.empty() ? message : path + ": " + message), path_(std::move(path)) {}

  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

}  // namespace nlsnet
