// Copyright 2026 The nlsnet Authors
// SPDX-License-Identifier: Apache-2.0

// Full-batch gradient solvers for min over (beta, gamma) of the network loss.

#pragma once

#include <Eigen/Core>

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "nlsnet/network.hpp"

namespace nlsnet {

enum class Algorithm { gd_momentum, adam, adadelta, rmsprop };

std::string_view to_string(Algorithm a);
/// Throws std::invalid_argument for unknown names.
Algorithm algorithm_from_string(std::string_view name);

struct OptimizerConfig {
  Algorithm algorithm = Algorithm::adam;
  double learning_rate = 0.05;
  double momentum = 0.9;      // gd_momentum
  double beta1 = 0.9;         // adam
  double beta2 = 0.999;       // adam
  double decay_rho = 0.9;     // adadelta, rmsprop
  double epsilon_guard = 1e-8;
  int max_iters = 5000;
  double loss_tol = 1e-10;
  double grad_tol = 1e-8;     // on the gradient in scaled coordinates
  // Updates act on (beta / scale[0], gamma / scale[1]).
  Eigen::Vector2d scale{1.0, 15.0};

  /// Tuned defaults for the given algorithm.
  static OptimizerConfig defaults(Algorithm algorithm);
  void validate() const;
};

/// Accumulators for one run; zero-initialized.
struct OptimizerState {
  Eigen::Vector2d first = Eigen::Vector2d::Zero();   // momentum / Adam m
  Eigen::Vector2d second = Eigen::Vector2d::Zero();  // squared-gradient average
  Eigen::Vector2d delta_sq = Eigen::Vector2d::Zero();  // Adadelta squared-update average
  long step = 0;
};

/// One update of the selected algorithm. Returns the increment to add to the
/// parameters; `state` is advanced. Throws NumericalError on a non-finite gradient.
Eigen::Vector2d optimizer_step(OptimizerState& state, const Eigen::Vector2d& grad, const OptimizerConfig& config);

enum class StopReason { loss_tol, grad_tol, max_iters, blow_up };
std::string_view to_string(StopReason r);

struct TrainRecord {
  long iter = 0;
  double loss = 0.0;
  double beta = 0.0;
  double gamma = 0.0;
  std::optional<double> e_beta;
  std::optional<double> e_gamma;
};

struct TrainHistory {
  std::vector<TrainRecord> iterations;
  bool converged = false;
  StopReason stop_reason = StopReason::max_iters;

  /// First iteration whose loss is below `threshold`, if any.
  std::optional<long> iterations_to(double threshold) const;
};

struct FitResult {
  Eigen::Vector2d estimate{0.0, 0.0};  // lowest-loss iterate
  double loss = 0.0;
  TrainHistory history;
};

FitResult fit(const ComplexSignal& input, const ComplexSignal& target, const Eigen::Vector2d& start,
              const SimGrid& grid, const OptimizerConfig& config,
              const std::optional<Eigen::Vector2d>& truth = std::nullopt);

}  // namespace nlsnet
