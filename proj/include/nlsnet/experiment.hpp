// Copyright 2026 The nlsnet Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "nlsnet/dataset.hpp"
#include "nlsnet/landscape.hpp"

namespace nlsnet {

enum class Scenario {
  generate,
  propagate,
  scan,
  fit,
  sweep,
  bias_variance,
  estimate_alpha,
  grad_check,
  stability_probe
};
std::string_view to_string(Scenario s);
/// Accepts both `bias_variance` and `bias-variance` spellings.
std::optional<Scenario> scenario_from_string(std::string_view s);

/// Fully resolved run description. Every field has a default; see
/// validate_config for the JSON layout.
struct ExperimentConfig {
  Scenario scenario = Scenario::fit;
  std::uint64_t seed = 1;
  std::string output_dir = "out";
  int threads = 0;  // 0: all hardware threads

  PulseSpec pulse;  // 10 ps, rho 0.1, 64 sps
  std::size_t num_symbols = 200;
  int zero_pad_per_side = 70;
  double power = 0.01;  // W

  FiberParams fiber;          // ground truth for generated data
  double alpha_per_km = 0.0;  // uniform loss applied to generated targets
  int num_layers = 100;       // model depth

  int oracle_layer_multiple = 1;
  int oracle_oversample = 1;

  bool noise_enabled = false;
  double snr = 200.0;
  std::uint64_t noise_seed = 0;  // defaults to seed + 1000003
  bool denoise = false;

  OptimizerConfig optimizer = OptimizerConfig::defaults(Algorithm::adam);
  Eigen::Vector2d start{-23.0, 10.0};

  GridSpec scan;  // defaults to GridSpec::around(fiber)
  bool refine_min = true;

  SweepAxis sweep_axis = SweepAxis::num_layers;
  std::vector<int> sweep_values{20, 40, 60, 80, 100};

  BiasVarianceConfig bias_variance;

  double grad_rel_step = 1e-6;
  std::vector<Eigen::Vector2d> grad_points;  // defaults to {truth, start}

  std::vector<Eigen::Vector2d> stability_deltas;

  std::string input_path;   // signal files; when both are set they replace generated data
  std::string target_path;

  DataSpec data_spec() const;
};

/// Parses and checks a raw JSON config: applies defaults, rejects unknown keys,
/// range-checks every value. Errors are ConfigError with a dotted field path.
ExperimentConfig validate_config(const nlohmann::json& raw);

/// Fully expanded JSON form of a config; validate_config(to_json(c)) == c.
nlohmann::json to_json(const ExperimentConfig& config);

/// Applies `path=value` to a raw config. The value is parsed as JSON when
/// possible and kept as a string otherwise. Throws ConfigError on bad syntax.
void apply_override(nlohmann::json& raw, const std::string& assignment);

struct RunResult {
  int exit_code = 0;
  std::vector<std::filesystem::path> outputs;  // data files, manifest excluded
  std::string summary;                        // one JSON line for stdout
};

/// Runs the scenario and writes its outputs plus manifest.json into
/// config.output_dir. Throws ConfigError / NumericalError; a fit that blows up
/// still writes its history and reports exit code 3.
RunResult run(const ExperimentConfig& config);

/// Build identifier recorded in manifests.
std::string build_id();

}  // namespace nlsnet
