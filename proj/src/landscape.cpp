// Copyright 2026 The nlsnet Authors
// SPDX-License-Identifier: Apache-2.0

#include "nlsnet/landscape.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "nlsnet/errors.hpp"
#include "nlsnet/network.hpp"
#include "nlsnet/parallel.hpp"

namespace nlsnet {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double lerp_point(const std::pair<double, double>& range, int k, int points) {
  if (points == 1) return range.first;
  if (k == points - 1) return range.second;
  return range.first + (range.second - range.first) * static_cast<double>(k) / (points - 1);
}

}  // namespace

double GridSpec::beta_at(int i) const { return lerp_point(beta_range, i, beta_points); }
double GridSpec::gamma_at(int j) const { return lerp_point(gamma_range, j, gamma_points); }

void GridSpec::validate() const {
  if (beta_points < 1 || gamma_points < 1) throw std::invalid_argument("grid needs at least 1 point per axis");
  // A single-point axis may have lo == hi.
  auto ok = [](const std::pair<double, double>& r, int points) {
    return std::isfinite(r.first) && std::isfinite(r.second) &&
           (r.first < r.second || (points == 1 && r.first == r.second));
  };
  if (!ok(beta_range, beta_points)) throw std::invalid_argument("beta range must satisfy lo < hi");
  if (!ok(gamma_range, gamma_points)) throw std::invalid_argument("gamma range must satisfy lo < hi");
}

GridSpec GridSpec::around(const FiberParams& center, double beta_frac, double gamma_frac, int points) {
  GridSpec s;
  const double db = beta_frac * std::abs(center.beta);
  const double dg = gamma_frac * std::abs(center.gamma);
  s.beta_range = {center.beta - db, center.beta + db};
  s.gamma_range = {center.gamma - dg, center.gamma + dg};
  s.beta_points = s.gamma_points = points;
  return s;
}

std::optional<std::pair<int, int>> LandscapeGrid::argmin() const {
  std::optional<std::pair<int, int>> best;
  double value = kInf;
  for (Eigen::Index i = 0; i < losses.rows(); ++i)
    for (Eigen::Index j = 0; j < losses.cols(); ++j)
      if (losses(i, j) < value) {
        value = losses(i, j);
        best = {static_cast<int>(i), static_cast<int>(j)};
      }
  return best;
}

int LandscapeGrid::count_components(double threshold) const {
  const Eigen::Index rows = losses.rows(), cols = losses.cols();
  Eigen::MatrixXi label = Eigen::MatrixXi::Zero(rows, cols);
  int components = 0;
  std::vector<std::pair<Eigen::Index, Eigen::Index>> stack;
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) {
      if (label(i, j) != 0 || !(losses(i, j) <= threshold)) continue;
      ++components;
      stack.assign(1, {i, j});
      label(i, j) = components;
      while (!stack.empty()) {
        auto [a, b] = stack.back();
        stack.pop_back();
        const std::pair<Eigen::Index, Eigen::Index> nbrs[] = {{a - 1, b}, {a + 1, b}, {a, b - 1}, {a, b + 1}};
        for (auto [x, y] : nbrs) {
          if (x < 0 || y < 0 || x >= rows || y >= cols) continue;
          if (label(x, y) != 0 || !(losses(x, y) <= threshold)) continue;
          label(x, y) = components;
          stack.emplace_back(x, y);
        }
      }
    }
  return components;
}

LandscapeGrid scan_grid(const ComplexSignal& input, const ComplexSignal& target, const SimGrid& grid,
                        const GridSpec& spec, int threads) {
  spec.validate();
  LandscapeGrid out;
  out.spec = spec;
  out.losses.resize(spec.beta_points, spec.gamma_points);
  const std::size_t cells = static_cast<std::size_t>(spec.beta_points) * spec.gamma_points;
  parallel_for(cells, threads, [&](std::size_t k) {
    const int i = static_cast<int>(k / spec.gamma_points);
    const int j = static_cast<int>(k % spec.gamma_points);
    double value = kInf;
    try {
      value = loss(NetworkParams{spec.beta_at(i), spec.gamma_at(j), grid}, input, target).value;
      if (!std::isfinite(value)) value = kInf;
    } catch (const NumericalError&) {
    }
    out.losses(i, j) = value;
  });
  return out;
}

GlobalMinimum find_global_min(const LandscapeGrid& landscape, const ComplexSignal& input,
                              const ComplexSignal& target, const SimGrid& grid, const OptimizerConfig& refine,
                              const std::optional<Eigen::Vector2d>& truth) {
  const auto cell = landscape.argmin();
  if (!cell) throw NumericalError("landscape has no finite cell");
  const Eigen::Vector2d start{landscape.spec.beta_at(cell->first), landscape.spec.gamma_at(cell->second)};
  GlobalMinimum g;
  g.fit = fit(input, target, start, grid, refine, truth);
  g.estimate = g.fit.estimate;
  g.loss = g.fit.loss;
  return g;
}

std::string_view to_string(SweepAxis a) {
  switch (a) {
    case SweepAxis::num_layers: return "num_layers";
    case SweepAxis::sampling_rate: return "sampling_rate";
    case SweepAxis::num_symbols: return "num_symbols";
  }
  return "?";
}

SweepAxis sweep_axis_from_string(std::string_view s) {
  for (SweepAxis a : {SweepAxis::num_layers, SweepAxis::sampling_rate, SweepAxis::num_symbols})
    if (to_string(a) == s) return a;
  throw std::invalid_argument("unknown sweep axis '" + std::string(s) + "'");
}

std::vector<SweepPoint> hyperparameter_sweep(SweepAxis axis, const std::vector<int>& values, const DataSpec& base,
                                             const OptimizerConfig& refine, int threads) {
  if (values.empty()) throw std::invalid_argument("sweep needs at least one value");
  std::vector<DataSpec> specs(values.size(), base);
  for (std::size_t k = 0; k < values.size(); ++k) {
    DataSpec& s = specs[k];
    switch (axis) {
      case SweepAxis::num_layers: s.model_layers = values[k]; break;
      case SweepAxis::sampling_rate: s.pulse.samples_per_symbol = values[k]; break;
      case SweepAxis::num_symbols:
        if (values[k] < 1) throw std::invalid_argument("num_symbols must be >= 1");
        s.num_symbols = static_cast<std::size_t>(values[k]);
        break;
    }
    s.validate();
  }

  const Eigen::Vector2d truth{base.truth.beta, base.truth.gamma};
  std::vector<SweepPoint> out(values.size());
  parallel_for(values.size(), threads, [&](std::size_t k) {
    const Dataset d = make_dataset(specs[k]);
    const FitResult r = fit(d.input, d.target, truth, d.grid, refine, truth);
    SweepPoint& p = out[k];
    p.value = values[k];
    p.loss = r.loss;
    p.estimate = r.estimate;
    p.e_beta = std::abs(r.estimate[0] - truth[0]);
    p.e_gamma = std::abs(r.estimate[1] - truth[1]);
  });
  return out;
}

MinimizerStats minimizer_stats(const std::vector<Eigen::Vector2d>& points, const Eigen::Vector2d& truth, int ns) {
  MinimizerStats s;
  s.ns = ns;
  s.n_ok = static_cast<int>(points.size());
  if (points.empty()) return s;
  // Deviations from the first point: exact zero spread for identical samples.
  const Eigen::Vector2d origin = points.front();
  Eigen::Vector2d sum = Eigen::Vector2d::Zero();
  Eigen::Matrix2d outer = Eigen::Matrix2d::Zero();
  for (const auto& p : points) {
    const Eigen::Vector2d d = p - origin;
    sum += d;
    outer += d * d.transpose();
  }
  const double n = static_cast<double>(points.size());
  s.mean = origin + sum / n;
  if (points.size() >= 2) {
    s.covariance = (outer - sum * sum.transpose() / n) / (n - 1.0);
    s.covariance(1, 0) = s.covariance(0, 1);
  }
  s.bias = (s.mean - truth).cwiseAbs();
  return s;
}

std::vector<MinimizerStats> bias_variance_experiment(const BiasVarianceConfig& config, const DataSpec& base,
                                                     const OptimizerConfig& refine, int threads) {
  if (config.seeds_per_group < 2) throw std::invalid_argument("seeds_per_group must be >= 2");
  if (config.ns_values.empty()) throw std::invalid_argument("ns_values must be non-empty");
  for (int ns : config.ns_values)
    if (ns < 1) throw std::invalid_argument("ns values must be >= 1");

  const Eigen::Vector2d truth{base.truth.beta, base.truth.gamma};
  std::vector<MinimizerStats> out(config.ns_values.size());
  parallel_for(config.ns_values.size(), threads, [&](std::size_t g) {
    std::vector<Eigen::Vector2d> minima;
    int excluded = 0;
    Eigen::Vector2d start = config.start;
    for (int s = 0; s < config.seeds_per_group; ++s) {
      DataSpec spec = base;
      spec.num_symbols = static_cast<std::size_t>(config.ns_values[g]);
      spec.seed = base.seed + static_cast<std::uint64_t>(s);
      spec.noise.seed = spec.seed;
      try {
        const Dataset d = make_dataset(spec);
        const FitResult r = fit(d.input, d.target, start, d.grid, refine);
        if (r.history.stop_reason == StopReason::blow_up || !r.estimate.allFinite()) {
          ++excluded;
          continue;
        }
        minima.push_back(r.estimate);
        start = r.estimate;
      } catch (const NumericalError&) {
        ++excluded;
      }
    }
    out[g] = minimizer_stats(minima, truth, config.ns_values[g]);
    out[g].group_size = config.seeds_per_group;
    out[g].n_excluded = excluded;
  });
  return out;
}

std::vector<StabilityRow> stability_probe(const ComplexSignal& input, const FiberParams& base,
                                          const std::vector<Eigen::Vector2d>& deltas, const SimGrid& grid,
                                          int threads) {
  for (const auto& d : deltas)
    if (!d.allFinite()) throw std::invalid_argument("perturbations must be finite");
  const ComplexSignal reference = propagate(input, base, grid);
  std::vector<StabilityRow> out(deltas.size());
  parallel_for(deltas.size(), threads, [&](std::size_t k) {
    const FiberParams p{base.beta + deltas[k][0], base.gamma + deltas[k][1], base.length};
    const ComplexSignal y = propagate(input, p, grid);
    const ComplexVector diff = y.samples - reference.samples;
    out[k] = {deltas[k][0], deltas[k][1], std::sqrt(input.tau * squared_norm(diff))};
  });
  return out;
}

}  // namespace nlsnet
