// Copyright 2026 The nlsnet Authors
// SPDX-License-Identifier: Apache-2.0

// Plain-text formats. Doubles are written with 17 significant digits so every
// value round-trips exactly.

#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "nlsnet/attenuation.hpp"
#include "nlsnet/estimator.hpp"
#include "nlsnet/landscape.hpp"

namespace nlsnet {

/// "%.17g", with `inf`, `-inf` and `nan` literals.
std::string format_double(double v);
/// Inverse of format_double. Throws std::invalid_argument on junk.
double parse_double(const std::string& s);

// {"tau_ps": t, "samples": [[re, im], ...]}
void write_signal_json(std::ostream& os, const ComplexSignal& signal);
ComplexSignal read_signal_json(std::istream& is);
void save_signal(const std::filesystem::path& path, const ComplexSignal& signal);
ComplexSignal load_signal(const std::filesystem::path& path);

// iter,loss,beta,gamma,e_beta,e_gamma
void write_history_csv(std::ostream& os, const TrainHistory& history);
std::vector<TrainRecord> read_history_csv(std::istream& is);

// beta,gamma,loss in row-major order (beta outer)
struct LandscapeRow {
  double beta = 0.0;
  double gamma = 0.0;
  double loss = 0.0;
};
void write_landscape_csv(std::ostream& os, const LandscapeGrid& grid);
std::vector<LandscapeRow> read_landscape_csv(std::istream& is);

// {"ns", "mean", "cov", "bias", "n_ok", "n_excluded"}; a run writes a JSON array of these.
std::string stats_json(const MinimizerStats& s);
void write_stats_json(std::ostream& os, const std::vector<MinimizerStats>& stats);
std::vector<MinimizerStats> read_stats_json(std::istream& is);

// {"alpha_per_km", "norm_in", "norm_out"}
std::string alpha_json(const AttenuationEstimate& e);

// value,J,beta,gamma,e_beta,e_gamma
void write_sweep_csv(std::ostream& os, const std::vector<SweepPoint>& points);
// d_beta,d_gamma,distance
void write_stability_csv(std::ostream& os, const std::vector<StabilityRow>& rows);

}  // namespace nlsnet
