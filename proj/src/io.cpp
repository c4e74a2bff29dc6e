// Copyright 2026 The nlsnet Authors
// SPDX-License-Identifier: Apache-2.0

#include "nlsnet/io.hpp"

#include <cctype>
#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace nlsnet {
namespace {

using json = nlohmann::json;

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, ',')) out.push_back(field);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

void expect_header(std::istream& is, const std::string& header) {
  std::string line;
  if (!std::getline(is, line) || line != header) throw std::invalid_argument("expected CSV header '" + header + "'");
}

double json_number(const json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) return parse_double(j.get<std::string>());
  throw std::invalid_argument("expected a number");
}

}  // namespace

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double parse_double(const std::string& s) {
  if (s == "inf") return INFINITY;
  if (s == "-inf") return -INFINITY;
  if (s == "nan") return NAN;
  if (s.empty() || std::isspace(static_cast<unsigned char>(s.front())))
    throw std::invalid_argument("not a number: '" + s + "'");
  char* end = nullptr;
  errno = 0;
  const double v = std::strtod(s.c_str(), &end);
  // Subnormal results set ERANGE but are still exact.
  const bool overflow = errno == ERANGE && std::abs(v) >= 1.0;
  if (end != s.c_str() + s.size() || overflow) throw std::invalid_argument("not a number: '" + s + "'");
  return v;
}

void write_signal_json(std::ostream& os, const ComplexSignal& signal) {
  os << "{\"tau_ps\": " << format_double(signal.tau) << ", \"samples\": [";
  for (Eigen::Index k = 0; k < signal.samples.size(); ++k) {
    if (k) os << ", ";
    os << '[' << format_double(signal.samples[k].real()) << ", " << format_double(signal.samples[k].imag()) << ']';
  }
  os << "]}\n";
}

ComplexSignal read_signal_json(std::istream& is) {
  const json doc = json::parse(is);
  if (!doc.is_object() || !doc.contains("tau_ps") || !doc.contains("samples"))
    throw std::invalid_argument("signal JSON needs tau_ps and samples");
  ComplexSignal s;
  s.tau = json_number(doc.at("tau_ps"));
  const json& arr = doc.at("samples");
  if (!arr.is_array()) throw std::invalid_argument("samples must be an array");
  s.samples.resize(static_cast<Eigen::Index>(arr.size()));
  for (std::size_t k = 0; k < arr.size(); ++k) {
    const json& pair = arr[k];
    if (!pair.is_array() || pair.size() != 2) throw std::invalid_argument("each sample must be [re, im]");
    s.samples[static_cast<Eigen::Index>(k)] = {json_number(pair[0]), json_number(pair[1])};
  }
  s.validate();
  return s;
}

void save_signal(const std::filesystem::path& path, const ComplexSignal& signal) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot write " + path.string());
  write_signal_json(os, signal);
}

ComplexSignal load_signal(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot read " + path.string());
  return read_signal_json(is);
}

void write_history_csv(std::ostream& os, const TrainHistory& history) {
  os << "iter,loss,beta,gamma,e_beta,e_gamma\n";
  for (const auto& r : history.iterations) {
    os << r.iter << ',' << format_double(r.loss) << ',' << format_double(r.beta) << ',' << format_double(r.gamma)
       << ',' << (r.e_beta ? format_double(*r.e_beta) : "") << ',' << (r.e_gamma ? format_double(*r.e_gamma) : "")
       << '\n';
  }
}

std::vector<TrainRecord> read_history_csv(std::istream& is) {
  expect_header(is, "iter,loss,beta,gamma,e_beta,e_gamma");
  std::vector<TrainRecord> out;
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    const auto f = split_csv_line(line);
    if (f.size() != 6) throw std::invalid_argument("history row needs 6 fields");
    TrainRecord r;
    r.iter = std::stol(f[0]);
    r.loss = parse_double(f[1]);
    r.beta = parse_double(f[2]);
    r.gamma = parse_double(f[3]);
    if (!f[4].empty()) r.e_beta = parse_double(f[4]);
    if (!f[5].empty()) r.e_gamma = parse_double(f[5]);
    out.push_back(r);
  }
  return out;
}

void write_landscape_csv(std::ostream& os, const LandscapeGrid& grid) {
  os << "beta,gamma,loss\n";
  for (int i = 0; i < grid.losses.rows(); ++i)
    for (int j = 0; j < grid.losses.cols(); ++j)
      os << format_double(grid.spec.beta_at(i)) << ',' << format_double(grid.spec.gamma_at(j)) << ','
         << format_double(grid.losses(i, j)) << '\n';
}

std::vector<LandscapeRow> read_landscape_csv(std::istream& is) {
  expect_header(is, "beta,gamma,loss");
  std::vector<LandscapeRow> out;
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    const auto f = split_csv_line(line);
    if (f.size() != 3) throw std::invalid_argument("landscape row needs 3 fields");
    out.push_back({parse_double(f[0]), parse_double(f[1]), parse_double(f[2])});
  }
  return out;
}

std::string stats_json(const MinimizerStats& s) {
  const auto& c = s.covariance;
  std::ostringstream os;
  os << "{\"ns\": " << s.ns << ", \"mean\": [" << format_double(s.mean[0]) << ", " << format_double(s.mean[1])
     << "], \"cov\": [[" << format_double(c(0, 0)) << ", " << format_double(c(0, 1)) << "], ["
     << format_double(c(1, 0)) << ", " << format_double(c(1, 1)) << "]], \"bias\": [" << format_double(s.bias[0])
     << ", " << format_double(s.bias[1]) << "], \"n_ok\": " << s.n_ok << ", \"n_excluded\": " << s.n_excluded
     << '}';
  return os.str();
}

void write_stats_json(std::ostream& os, const std::vector<MinimizerStats>& stats) {
  os << "[\n";
  for (std::size_t k = 0; k < stats.size(); ++k) os << "  " << stats_json(stats[k]) << (k + 1 < stats.size() ? ",\n" : "\n");
  os << "]\n";
}

std::vector<MinimizerStats> read_stats_json(std::istream& is) {
  const json doc = json::parse(is);
  if (!doc.is_array()) throw std::invalid_argument("stats JSON must be an array");
  std::vector<MinimizerStats> out;
  for (const json& o : doc) {
    MinimizerStats s;
    s.ns = o.at("ns").get<int>();
    s.mean = {json_number(o.at("mean").at(0)), json_number(o.at("mean").at(1))};
    for (int r = 0; r < 2; ++r)
      for (int c = 0; c < 2; ++c) s.covariance(r, c) = json_number(o.at("cov").at(r).at(c));
    s.bias = {json_number(o.at("bias").at(0)), json_number(o.at("bias").at(1))};
    s.n_ok = o.at("n_ok").get<int>();
    s.n_excluded = o.at("n_excluded").get<int>();
    out.push_back(s);
  }
  return out;
}

std::string alpha_json(const AttenuationEstimate& e) {
  return "{\"alpha_per_km\": " + format_double(e.alpha) + ", \"norm_in\": " + format_double(e.norm_in) +
         ", \"norm_out\": " + format_double(e.norm_out) + "}";
}

void write_sweep_csv(std::ostream& os, const std::vector<SweepPoint>& points) {
  os << "value,J,beta,gamma,e_beta,e_gamma\n";
  for (const auto& p : points)
    os << format_double(p.value) << ',' << format_double(p.loss) << ',' << format_double(p.estimate[0]) << ','
       << format_double(p.estimate[1]) << ',' << format_double(p.e_beta) << ',' << format_double(p.e_gamma) << '\n';
}

void write_stability_csv(std::ostream& os, const std::vector<StabilityRow>& rows) {
  os << "d_beta,d_gamma,distance\n";
  for (const auto& r : rows)
    os << format_double(r.d_beta) << ',' << format_double(r.d_gamma) << ',' << format_double(r.distance) << '\n';
}

}  // namespace nlsnet
