// Copyright 2026 The nlsnet Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "nlsnet/dataset.hpp"
#include "nlsnet/estimator.hpp"

namespace nlsnet {

/// Rectangular (beta, gamma) lattice, endpoints included. An axis with one
/// point sits at its lower bound.
struct GridSpec {
  std::pair<double, double> beta_range{-25.92, -17.28};
  std::pair<double, double> gamma_range{-3.2, 6.4};
  int beta_points = 101;
  int gamma_points = 101;

  double beta_at(int i) const;
  double gamma_at(int j) const;
  void validate() const;

  /// Window of +-beta_frac*|beta| and +-gamma_frac*|gamma| around `center`.
  static GridSpec around(const FiberParams& center, double beta_frac = 0.2, double gamma_frac = 3.0,
                         int points = 101);
};

/// losses(i, j) = J(beta_i, gamma_j); +inf marks cells where propagation blew up.
struct LandscapeGrid {
  GridSpec spec;
  Eigen::MatrixXd losses;

  /// Smallest finite cell, if any.
  std::optional<std::pair<int, int>> argmin() const;
  /// Number of 4-connected components among cells with loss <= threshold.
  int count_components(double threshold) const;
};

LandscapeGrid scan_grid(const ComplexSignal& input, const ComplexSignal& target, const SimGrid& grid,
                        const GridSpec& spec, int threads = 0);

struct GlobalMinimum {
  Eigen::Vector2d estimate{0.0, 0.0};
  double loss = 0.0;
  FitResult fit;
};

/// Seeds a local fit at the argmin cell of `landscape`. Throws if no cell is finite.
GlobalMinimum find_global_min(const LandscapeGrid& landscape, const ComplexSignal& input,
                              const ComplexSignal& target, const SimGrid& grid,
                              const OptimizerConfig& refine = OptimizerConfig::defaults(Algorithm::gd_momentum),
                              const std::optional<Eigen::Vector2d>& truth = std::nullopt);

enum class SweepAxis { num_layers, sampling_rate, num_symbols };
std::string_view to_string(SweepAxis a);
SweepAxis sweep_axis_from_string(std::string_view s);  // throws std::invalid_argument

struct SweepPoint {
  double value = 0.0;
  double loss = 0.0;  // J at the fitted minimizer
  Eigen::Vector2d estimate{0.0, 0.0};
  double e_beta = 0.0;
  double e_gamma = 0.0;
};

/// For each value, rebuilds the data with `base` changed along `axis` (the
/// oracle stays at base fidelity) and fits from the truth.
std::vector<SweepPoint> hyperparameter_sweep(SweepAxis axis, const std::vector<int>& values, const DataSpec& base,
                                             const OptimizerConfig& refine, int threads = 0);

struct MinimizerStats {
  int group_size = 0;
  int ns = 0;
  Eigen::Vector2d mean{0.0, 0.0};
  Eigen::Matrix2d covariance = Eigen::Matrix2d::Zero();  // unbiased sample covariance
  Eigen::Vector2d bias{0.0, 0.0};                        // |mean - truth|, per component
  int n_ok = 0;
  int n_excluded = 0;
};

/// Mean, covariance and bias of a set of minimizers. Covariance is zero for
/// fewer than two points.
MinimizerStats minimizer_stats(const std::vector<Eigen::Vector2d>& points, const Eigen::Vector2d& truth, int ns);

struct BiasVarianceConfig {
  int seeds_per_group = 30;
  std::vector<int> ns_values{50, 100, 150, 200};
  Eigen::Vector2d start{-23.0, 10.0};  // first fit of each group; later fits warm-start
};

/// One group per Ns. Sequence s uses seed base.seed + s in every group, so a
/// longer group's sequences extend the shorter groups' symbols.
/// Fits that blow up or throw are excluded and counted.
std::vector<MinimizerStats> bias_variance_experiment(const BiasVarianceConfig& config, const DataSpec& base,
                                                     const OptimizerConfig& refine, int threads = 0);

struct StabilityRow {
  double d_beta = 0.0;
  double d_gamma = 0.0;
  double distance = 0.0;  // sqrt(tau * sum |A - A_base|^2)
};

std::vector<StabilityRow> stability_probe(const ComplexSignal& input, const FiberParams& base,
                                          const std::vector<Eigen::Vector2d>& deltas, const SimGrid& grid,
                                          int threads = 0);

}  // namespace nlsnet
