// Copyright 2026 The nlsnet Authors
// SPDX-License-Identifier: Apache-2.0

#include "nlsnet/experiment.hpp"

#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>
#include <utility>

#include "nlsnet/attenuation.hpp"
#include "nlsnet/errors.hpp"
#include "nlsnet/io.hpp"
#include "nlsnet/network.hpp"

#ifndef NLSNET_VERSION
#define NLSNET_VERSION "0.0.0"
#endif
#ifndef NLSNET_BUILD_TYPE
#define NLSNET_BUILD_TYPE "unknown"
#endif

namespace nlsnet {
namespace {

using json = nlohmann::json;

constexpr std::uint64_t kNoiseSeedOffset = 1000003;

const Scenario kScenarios[] = {Scenario::generate,      Scenario::propagate,      Scenario::scan,
                               Scenario::fit,           Scenario::sweep,          Scenario::bias_variance,
                               Scenario::estimate_alpha, Scenario::grad_check,    Scenario::stability_probe};

// Reads one JSON object, remembering which keys were consumed so leftovers can
// be reported as unknown.
class Section {
 public:
  Section(const json& obj, std::string path) : obj_(obj), path_(std::move(path)) {
    if (!obj_.is_object()) throw ConfigError(path_, "expected an object");
  }

  std::string at(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

  const json* find(const std::string& key) {
    seen_.insert(key);
    auto it = obj_.find(key);
    return it == obj_.end() || it->is_null() ? nullptr : &*it;
  }

  Section section(const std::string& key) {
    const json* j = find(key);
    return Section(j ? *j : empty(), at(key));
  }

  bool number(const std::string& key, double& out) {
    const json* j = find(key);
    if (!j) return false;
    out = as_number(*j, at(key));
    return true;
  }

  template <class Int>
  bool integer(const std::string& key, Int& out) {
    const json* j = find(key);
    if (!j) return false;
    if (j->is_number_unsigned()) {
      const auto v = j->get<std::uint64_t>();
      if (!std::in_range<Int>(v)) throw ConfigError(at(key), "out of range");
      out = static_cast<Int>(v);
    } else if (j->is_number_integer()) {
      const auto v = j->get<std::int64_t>();
      if (std::is_unsigned_v<Int> && v < 0) throw ConfigError(at(key), "must be non-negative");
      if (!std::in_range<Int>(v)) throw ConfigError(at(key), "out of range");
      out = static_cast<Int>(v);
    } else {
      throw ConfigError(at(key), "expected an integer");
    }
    return true;
  }

  bool boolean(const std::string& key, bool& out) {
    const json* j = find(key);
    if (!j) return false;
    if (!j->is_boolean()) throw ConfigError(at(key), "expected true or false");
    out = j->get<bool>();
    return true;
  }

  bool string(const std::string& key, std::string& out) {
    const json* j = find(key);
    if (!j) return false;
    if (!j->is_string()) throw ConfigError(at(key), "expected a string");
    out = j->get<std::string>();
    return true;
  }

  bool pair(const std::string& key, Eigen::Vector2d& out) {
    const json* j = find(key);
    if (!j) return false;
    out = as_pair(*j, at(key));
    return true;
  }

  bool pairs(const std::string& key, std::vector<Eigen::Vector2d>& out) {
    const json* j = find(key);
    if (!j) return false;
    if (!j->is_array()) throw ConfigError(at(key), "expected a list of [x, y] pairs");
    out.clear();
    for (std::size_t k = 0; k < j->size(); ++k) out.push_back(as_pair((*j)[k], at(key) + "[" + std::to_string(k) + "]"));
    return true;
  }

  bool integers(const std::string& key, std::vector<int>& out) {
    const json* j = find(key);
    if (!j) return false;
    if (!j->is_array()) throw ConfigError(at(key), "expected a list of integers");
    out.clear();
    for (const json& v : *j) {
      if (!v.is_number_integer()) throw ConfigError(at(key), "expected a list of integers");
      const auto x = v.get<std::int64_t>();
      if (x < std::numeric_limits<int>::min() || x > std::numeric_limits<int>::max())
        throw ConfigError(at(key), "out of range");
      out.push_back(static_cast<int>(x));
    }
    return true;
  }

  void finish() const {
    for (auto it = obj_.begin(); it != obj_.end(); ++it)
      if (!seen_.count(it.key())) throw ConfigError(at(it.key()), "unknown key");
  }

 private:
  static const json& empty() {
    static const json e = json::object();
    return e;
  }

  static double as_number(const json& j, const std::string& path) {
    if (j.is_number()) return j.get<double>();
    if (j.is_string()) {
      const auto& s = j.get_ref<const std::string&>();
      if (s == "inf") return std::numeric_limits<double>::infinity();
      if (s == "-inf") return -std::numeric_limits<double>::infinity();
    }
    throw ConfigError(path, "expected a number");
  }

  static Eigen::Vector2d as_pair(const json& j, const std::string& path) {
    if (!j.is_array() || j.size() != 2) throw ConfigError(path, "expected [x, y]");
    const Eigen::Vector2d v{as_number(j[0], path + "[0]"), as_number(j[1], path + "[1]")};
    if (!v.allFinite()) throw ConfigError(path, "must be finite");
    return v;
  }

  const json& obj_;
  std::string path_;
  std::set<std::string> seen_;
};

void require(bool ok, const std::string& path, const std::string& message) {
  if (!ok) throw ConfigError(path, message);
}

bool finite(double v) { return std::isfinite(v); }
bool in_unit(double v) { return v >= 0.0 && v < 1.0; }

json number_json(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

json pair_json(const Eigen::Vector2d& v) { return json::array({v[0], v[1]}); }

json pairs_json(const std::vector<Eigen::Vector2d>& vs) {
  json a = json::array();
  for (const auto& v : vs) a.push_back(pair_json(v));
  return a;
}

std::vector<Eigen::Vector2d> default_deltas() {
  return {{0.0, 0.0}, {0.1, 0.0}, {0.2, 0.0}, {0.4, 0.0}, {0.0, 0.1}, {0.0, -0.1}, {0.1, 0.1}};
}

struct Data {
  ComplexSignal input;
  ComplexSignal target;
  SimGrid grid;
  std::optional<Eigen::Vector2d> truth;
};

Data load_or_make(const ExperimentConfig& c) {
  Data d;
  if (!c.input_path.empty() && !c.target_path.empty()) {
    d.input = load_signal(c.input_path);
    d.target = load_signal(c.target_path);
    if (d.input.size() != d.target.size()) throw ConfigError("io.target", "length differs from io.input");
    d.grid = SimGrid::make(c.fiber.length, c.num_layers, d.input.size(), d.input.tau);
    return d;
  }
  Dataset ds = make_dataset(c.data_spec());
  d.input = std::move(ds.input);
  d.target = std::move(ds.target);
  d.grid = ds.grid;
  d.truth = Eigen::Vector2d{c.fiber.beta, c.fiber.gamma};
  return d;
}

ComplexSignal apply_loss(ComplexSignal s, const ExperimentConfig& c) {
  if (c.alpha_per_km > 0.0) s.samples *= std::exp(-0.5 * c.alpha_per_km * c.fiber.length);
  return s;
}

class OutputDir {
 public:
  explicit OutputDir(const std::string& dir) : dir_(dir) { std::filesystem::create_directories(dir_); }

  std::ofstream open(const std::string& name) {
    const auto path = dir_ / name;
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot write " + path.string());
    written_.push_back(path);
    return os;
  }

  void signal(const std::string& name, const ComplexSignal& s) {
    auto os = open(name);
    write_signal_json(os, s);
  }

  const std::filesystem::path& dir() const { return dir_; }
  std::vector<std::filesystem::path> written() const { return written_; }

 private:
  std::filesystem::path dir_;
  std::vector<std::filesystem::path> written_;
};

std::string utc_now() {
  const std::time_t t = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace

std::string_view to_string(Scenario s) {
  switch (s) {
    case Scenario::generate: return "generate";
    case Scenario::propagate: return "propagate";
    case Scenario::scan: return "scan";
    case Scenario::fit: return "fit";
    case Scenario::sweep: return "sweep";
    case Scenario::bias_variance: return "bias_variance";
    case Scenario::estimate_alpha: return "estimate_alpha";
    case Scenario::grad_check: return "grad_check";
    case Scenario::stability_probe: return "stability_probe";
  }
  return "?";
}

std::optional<Scenario> scenario_from_string(std::string_view s) {
  std::string name(s);
  for (char& ch : name)
    if (ch == '-') ch = '_';
  for (Scenario sc : kScenarios)
    if (to_string(sc) == name) return sc;
  return std::nullopt;
}

DataSpec ExperimentConfig::data_spec() const {
  DataSpec d;
  d.pulse = pulse;
  d.num_symbols = num_symbols;
  d.zero_pad_per_side = zero_pad_per_side;
  d.power = power;
  d.seed = seed;
  d.truth = fiber;
  d.model_layers = num_layers;
  d.oracle_layers = num_layers * oracle_layer_multiple;
  d.oracle_samples_per_symbol = pulse.samples_per_symbol * oracle_oversample;
  d.noise = NoiseSpec{noise_enabled ? snr : std::numeric_limits<double>::infinity(), noise_seed};
  d.denoise = denoise;
  return d;
}

ExperimentConfig validate_config(const json& raw) {
  ExperimentConfig c;
  Section root(raw, "");

  std::string scenario;
  if (!root.string("scenario", scenario)) throw ConfigError("scenario", "missing required scenario");
  const auto sc = scenario_from_string(scenario);
  if (!sc) throw ConfigError("scenario", "unknown scenario '" + scenario + "'");
  c.scenario = *sc;
  root.integer("seed", c.seed);
  root.string("output_dir", c.output_dir);
  require(!c.output_dir.empty(), "output_dir", "must be non-empty");
  if (root.integer("threads", c.threads)) require(c.threads >= 0, "threads", "must be >= 0");

  {
    Section s = root.section("pulse");
    s.number("symbol_period_ps", c.pulse.symbol_period);
    require(finite(c.pulse.symbol_period) && c.pulse.symbol_period > 0, s.at("symbol_period_ps"), "must be positive");
    s.number("rolloff_rho", c.pulse.rolloff);
    require(c.pulse.rolloff > 0 && c.pulse.rolloff <= 1, s.at("rolloff_rho"), "must lie in (0, 1]");
    s.integer("samples_per_symbol", c.pulse.samples_per_symbol);
    require(c.pulse.samples_per_symbol >= 2, s.at("samples_per_symbol"), "must be >= 2");
    s.finish();
  }
  {
    Section s = root.section("symbols");
    s.integer("num_symbols", c.num_symbols);
    require(c.num_symbols >= 1, s.at("num_symbols"), "must be >= 1");
    s.integer("zero_pad_per_side", c.zero_pad_per_side);
    require(c.zero_pad_per_side >= 0, s.at("zero_pad_per_side"), "must be >= 0");
    s.number("power_w", c.power);
    require(finite(c.power) && c.power > 0, s.at("power_w"), "must be positive");
    s.finish();
  }
  {
    Section s = root.section("fiber");
    s.number("beta", c.fiber.beta);
    require(finite(c.fiber.beta), s.at("beta"), "must be finite");
    s.number("gamma", c.fiber.gamma);
    require(finite(c.fiber.gamma), s.at("gamma"), "must be finite");
    s.number("length_km", c.fiber.length);
    require(finite(c.fiber.length) && c.fiber.length > 0, s.at("length_km"), "must be positive");
    s.number("alpha_per_km", c.alpha_per_km);
    require(finite(c.alpha_per_km) && c.alpha_per_km >= 0, s.at("alpha_per_km"), "must be >= 0");
    s.finish();
  }
  {
    Section s = root.section("grid");
    s.integer("num_layers", c.num_layers);
    require(c.num_layers >= 1, s.at("num_layers"), "must be >= 1");
    s.finish();
  }
  {
    Section s = root.section("oracle");
    s.integer("layer_multiple", c.oracle_layer_multiple);
    require(c.oracle_layer_multiple >= 1, s.at("layer_multiple"), "must be >= 1");
    s.integer("oversample", c.oracle_oversample);
    require(c.oracle_oversample >= 1, s.at("oversample"), "must be >= 1");
    s.finish();
  }
  {
    Section s = root.section("noise");
    s.boolean("enabled", c.noise_enabled);
    s.number("snr", c.snr);
    require(!std::isnan(c.snr) && c.snr > 0, s.at("snr"), "must be positive");
    c.noise_seed = c.seed + kNoiseSeedOffset;
    s.integer("seed", c.noise_seed);
    s.boolean("denoise", c.denoise);
    s.finish();
  }
  {
    Section s = root.section("optimizer");
    std::string algo = std::string(to_string(c.optimizer.algorithm));
    if (s.string("algorithm", algo)) {
      try {
        c.optimizer = OptimizerConfig::defaults(algorithm_from_string(algo));
      } catch (const std::invalid_argument& e) {
        throw ConfigError(s.at("algorithm"), e.what());
      }
    }
    OptimizerConfig& o = c.optimizer;
    if (c.noise_enabled && c.snr < std::numeric_limits<double>::infinity()) o.loss_tol = 1e-6;
    s.number("learning_rate", o.learning_rate);
    require(finite(o.learning_rate) && o.learning_rate > 0, s.at("learning_rate"), "must be positive");
    s.number("momentum", o.momentum);
    require(in_unit(o.momentum), s.at("momentum"), "must lie in [0, 1)");
    s.number("beta1", o.beta1);
    require(in_unit(o.beta1), s.at("beta1"), "must lie in [0, 1)");
    s.number("beta2", o.beta2);
    require(in_unit(o.beta2), s.at("beta2"), "must lie in [0, 1)");
    s.number("decay_rho", o.decay_rho);
    require(in_unit(o.decay_rho), s.at("decay_rho"), "must lie in [0, 1)");
    s.number("epsilon_guard", o.epsilon_guard);
    require(finite(o.epsilon_guard) && o.epsilon_guard > 0, s.at("epsilon_guard"), "must be positive");
    s.integer("max_iters", o.max_iters);
    require(o.max_iters >= 1, s.at("max_iters"), "must be >= 1");
    s.number("loss_tol", o.loss_tol);
    require(finite(o.loss_tol) && o.loss_tol >= 0, s.at("loss_tol"), "must be >= 0");
    s.number("grad_tol", o.grad_tol);
    require(finite(o.grad_tol) && o.grad_tol >= 0, s.at("grad_tol"), "must be >= 0");
    s.pair("scale", o.scale);
    require((o.scale.array() > 0).all(), s.at("scale"), "entries must be positive");
    s.finish();
  }
  {
    Section s = root.section("fit");
    s.pair("start", c.start);
    s.finish();
  }
  {
    Section s = root.section("scan");
    c.scan = GridSpec::around(c.fiber);
    Eigen::Vector2d r;
    if (s.pair("beta_range", r)) c.scan.beta_range = {r[0], r[1]};
    if (s.pair("gamma_range", r)) c.scan.gamma_range = {r[0], r[1]};
    s.integer("beta_points", c.scan.beta_points);
    require(c.scan.beta_points >= 1, s.at("beta_points"), "must be >= 1");
    s.integer("gamma_points", c.scan.gamma_points);
    require(c.scan.gamma_points >= 1, s.at("gamma_points"), "must be >= 1");
    const auto ordered = [](const std::pair<double, double>& rg, int n) {
      return rg.first < rg.second || (n == 1 && rg.first == rg.second);
    };
    require(ordered(c.scan.beta_range, c.scan.beta_points), s.at("beta_range"), "must satisfy lo < hi");
    require(ordered(c.scan.gamma_range, c.scan.gamma_points), s.at("gamma_range"), "must satisfy lo < hi");
    s.boolean("refine_min", c.refine_min);
    s.finish();
  }
  {
    Section s = root.section("sweep");
    std::string axis(to_string(c.sweep_axis));
    if (s.string("axis", axis)) {
      try {
        c.sweep_axis = sweep_axis_from_string(axis);
      } catch (const std::invalid_argument& e) {
        throw ConfigError(s.at("axis"), e.what());
      }
    }
    s.integers("values", c.sweep_values);
    require(!c.sweep_values.empty(), s.at("values"), "must be non-empty");
    for (int v : c.sweep_values) require(v >= 1, s.at("values"), "entries must be >= 1");
    if (c.sweep_axis == SweepAxis::sampling_rate)
      for (int v : c.sweep_values)
        require(v >= 2 && (c.pulse.samples_per_symbol * c.oracle_oversample) % v == 0, s.at("values"),
                "sampling rates must divide the oracle rate");
    s.finish();
  }
  {
    Section s = root.section("bias_variance");
    s.integer("seeds_per_group", c.bias_variance.seeds_per_group);
    require(c.bias_variance.seeds_per_group >= 2, s.at("seeds_per_group"), "must be >= 2");
    s.integers("ns_values", c.bias_variance.ns_values);
    require(!c.bias_variance.ns_values.empty(), s.at("ns_values"), "must be non-empty");
    for (int v : c.bias_variance.ns_values) require(v >= 1, s.at("ns_values"), "entries must be >= 1");
    c.bias_variance.start = c.start;
    s.pair("start", c.bias_variance.start);
    s.finish();
  }
  {
    Section s = root.section("grad_check");
    s.number("rel_step", c.grad_rel_step);
    require(finite(c.grad_rel_step) && c.grad_rel_step > 0, s.at("rel_step"), "must be positive");
    c.grad_points = {{c.fiber.beta, c.fiber.gamma}, c.start};
    s.pairs("points", c.grad_points);
    require(!c.grad_points.empty(), s.at("points"), "must be non-empty");
    s.finish();
  }
  {
    Section s = root.section("stability");
    c.stability_deltas = default_deltas();
    s.pairs("deltas", c.stability_deltas);
    s.finish();
  }
  {
    Section s = root.section("io");
    s.string("input", c.input_path);
    s.string("target", c.target_path);
    s.finish();
  }
  root.finish();

  if (c.scenario == Scenario::estimate_alpha) {
    require(!c.input_path.empty(), "io.input", "required for estimate_alpha");
    require(!c.target_path.empty(), "io.target", "required for estimate_alpha");
  }
  if (!c.input_path.empty() != !c.target_path.empty() && c.scenario != Scenario::propagate &&
      c.scenario != Scenario::stability_probe)
    throw ConfigError(c.input_path.empty() ? "io.input" : "io.target", "io.input and io.target must be set together");
  return c;
}

json to_json(const ExperimentConfig& c) {
  const OptimizerConfig& o = c.optimizer;
  json j;
  j["scenario"] = std::string(to_string(c.scenario));
  j["seed"] = c.seed;
  j["output_dir"] = c.output_dir;
  j["threads"] = c.threads;
  j["pulse"] = {{"symbol_period_ps", c.pulse.symbol_period},
                {"rolloff_rho", c.pulse.rolloff},
                {"samples_per_symbol", c.pulse.samples_per_symbol}};
  j["symbols"] = {{"num_symbols", c.num_symbols}, {"zero_pad_per_side", c.zero_pad_per_side}, {"power_w", c.power}};
  j["fiber"] = {{"beta", c.fiber.beta},
                {"gamma", c.fiber.gamma},
                {"length_km", c.fiber.length},
                {"alpha_per_km", c.alpha_per_km}};
  j["grid"] = {{"num_layers", c.num_layers}};
  j["oracle"] = {{"layer_multiple", c.oracle_layer_multiple}, {"oversample", c.oracle_oversample}};
  j["noise"] = {
      {"enabled", c.noise_enabled}, {"snr", number_json(c.snr)}, {"seed", c.noise_seed}, {"denoise", c.denoise}};
  j["optimizer"] = {{"algorithm", std::string(to_string(o.algorithm))},
                    {"learning_rate", o.learning_rate},
                    {"momentum", o.momentum},
                    {"beta1", o.beta1},
                    {"beta2", o.beta2},
                    {"decay_rho", o.decay_rho},
                    {"epsilon_guard", o.epsilon_guard},
                    {"max_iters", o.max_iters},
                    {"loss_tol", o.loss_tol},
                    {"grad_tol", o.grad_tol},
                    {"scale", pair_json(o.scale)}};
  j["fit"] = {{"start", pair_json(c.start)}};
  j["scan"] = {{"beta_range", json::array({c.scan.beta_range.first, c.scan.beta_range.second})},
               {"gamma_range", json::array({c.scan.gamma_range.first, c.scan.gamma_range.second})},
               {"beta_points", c.scan.beta_points},
               {"gamma_points", c.scan.gamma_points},
               {"refine_min", c.refine_min}};
  j["sweep"] = {{"axis", std::string(to_string(c.sweep_axis))}, {"values", c.sweep_values}};
  j["bias_variance"] = {{"seeds_per_group", c.bias_variance.seeds_per_group},
                        {"ns_values", c.bias_variance.ns_values},
                        {"start", pair_json(c.bias_variance.start)}};
  j["grad_check"] = {{"rel_step", c.grad_rel_step}, {"points", pairs_json(c.grad_points)}};
  j["stability"] = {{"deltas", pairs_json(c.stability_deltas)}};
  j["io"] = {{"input", c.input_path}, {"target", c.target_path}};
  return j;
}

void apply_override(json& raw, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) throw ConfigError("", "--set expects path=value, got '" + assignment + "'");
  const std::string path = assignment.substr(0, eq);
  const std::string text = assignment.substr(eq + 1);

  json value = json::parse(text, nullptr, false);
  if (value.is_discarded()) value = text;

  if (!raw.is_object()) raw = json::object();
  json* node = &raw;
  std::size_t begin = 0;
  while (true) {
    const auto dot = path.find('.', begin);
    const std::string key = path.substr(begin, dot == std::string::npos ? std::string::npos : dot - begin);
    if (key.empty()) throw ConfigError(path, "empty path component");
    if (dot == std::string::npos) {
      (*node)[key] = value;
      return;
    }
    json& child = (*node)[key];
    if (child.is_null()) child = json::object();
    if (!child.is_object()) throw ConfigError(path.substr(0, dot), "is not a section");
    node = &child;
    begin = dot + 1;
  }
}

std::string build_id() {
  std::ostringstream os;
  os << "nlsnet " << NLSNET_VERSION << " (" << NLSNET_BUILD_TYPE << ", ";
#if defined(__clang__)
  os << "clang " << __clang_major__ << '.' << __clang_minor__;
#elif defined(__GNUC__)
  os << "gcc " << __GNUC__ << '.' << __GNUC_MINOR__;
#else
  os << "unknown compiler";
#endif
  os << ')';
  return os.str();
}

RunResult run(const ExperimentConfig& c) {
  const auto t0 = std::chrono::steady_clock::now();
  const std::string started = utc_now();
  OutputDir out(c.output_dir);
  RunResult result;
  json summary;

  switch (c.scenario) {
    case Scenario::generate: {
      const Data d = load_or_make(c);
      const ComplexSignal target = apply_loss(d.target, c);
      out.signal("input.json", d.input);
      out.signal("target.json", target);
      summary = {{"num_samples", d.input.size()}, {"tau_ps", d.input.tau}};
      break;
    }
    case Scenario::propagate: {
      ComplexSignal input;
      if (!c.input_path.empty()) {
        input = load_signal(c.input_path);
      } else {
        const SymbolSequence symbols = generate_symbols(c.num_symbols, Constellation::qam16(), c.seed,
                                                        c.zero_pad_per_side, c.power);
        input = modulate(symbols, c.pulse);
      }
      const SimGrid grid = SimGrid::make(c.fiber.length, c.num_layers, input.size(), input.tau);
      const ComplexSignal output = apply_loss(propagate(input, c.fiber, grid), c);
      out.signal("input.json", input);
      out.signal("output.json", output);
      summary = {{"num_samples", input.size()}, {"tau_ps", input.tau}};
      break;
    }
    case Scenario::scan: {
      const Data d = load_or_make(c);
      const LandscapeGrid g = scan_grid(d.input, d.target, d.grid, c.scan, c.threads);
      {
        auto os = out.open("landscape.csv");
        write_landscape_csv(os, g);
      }
      const auto cell = g.argmin();
      if (!cell) throw NumericalError("every landscape cell blew up");
      const double jmin = g.losses(cell->first, cell->second);
      summary = {{"argmin", {c.scan.beta_at(cell->first), c.scan.gamma_at(cell->second)}},
                 {"loss", jmin},
                 {"components_2x", g.count_components(2.0 * jmin)}};
      if (c.refine_min) {
        const GlobalMinimum m = find_global_min(g, d.input, d.target, d.grid, c.optimizer, d.truth);
        summary["estimate"] = pair_json(m.estimate);
        summary["estimate_loss"] = m.loss;
      }
      auto os = out.open("minimum.json");
      os << summary.dump() << '\n';
      break;
    }
    case Scenario::fit: {
      const Data d = load_or_make(c);
      const FitResult r = fit(d.input, d.target, c.start, d.grid, c.optimizer, d.truth);
      {
        auto os = out.open("history.csv");
        write_history_csv(os, r.history);
      }
      summary = {{"estimate", pair_json(r.estimate)},
                 {"loss", r.loss},
                 {"iterations", r.history.iterations.size()},
                 {"converged", r.history.converged},
                 {"stop_reason", std::string(to_string(r.history.stop_reason))}};
      auto os = out.open("fit.json");
      os << summary.dump() << '\n';
      if (r.history.stop_reason == StopReason::blow_up) result.exit_code = 3;
      break;
    }
    case Scenario::sweep: {
      const auto points = hyperparameter_sweep(c.sweep_axis, c.sweep_values, c.data_spec(), c.optimizer, c.threads);
      auto os = out.open("sweep.csv");
      write_sweep_csv(os, points);
      summary = {{"axis", std::string(to_string(c.sweep_axis))}, {"points", points.size()}};
      break;
    }
    case Scenario::bias_variance: {
      const auto stats = bias_variance_experiment(c.bias_variance, c.data_spec(), c.optimizer, c.threads);
      auto os = out.open("stats.json");
      write_stats_json(os, stats);
      summary = {{"groups", stats.size()}};
      break;
    }
    case Scenario::estimate_alpha: {
      const AttenuationEstimate e =
          estimate_alpha(load_signal(c.input_path), load_signal(c.target_path), c.fiber.length);
      auto os = out.open("alpha.json");
      os << alpha_json(e) << '\n';
      summary = json::parse(alpha_json(e));
      break;
    }
    case Scenario::grad_check: {
      const Data d = load_or_make(c);
      auto os = out.open("grad_check.csv");
      os << "beta,gamma,d_beta,d_gamma,fd_beta,fd_gamma,rel_err_beta,rel_err_gamma\n";
      double worst = 0.0;
      for (const auto& p : c.grad_points) {
        const GradCheck g = grad_check(NetworkParams{p[0], p[1], d.grid}, d.input, d.target, c.grad_rel_step);
        os << format_double(p[0]) << ',' << format_double(p[1]) << ',' << format_double(g.analytic.d_beta) << ','
           << format_double(g.analytic.d_gamma) << ',' << format_double(g.numeric.d_beta) << ','
           << format_double(g.numeric.d_gamma) << ',' << format_double(g.rel_err_beta) << ','
           << format_double(g.rel_err_gamma) << '\n';
        worst = std::max({worst, g.rel_err_beta, g.rel_err_gamma});
      }
      summary = {{"points", c.grad_points.size()}, {"max_rel_err", worst}};
      break;
    }
    case Scenario::stability_probe: {
      ComplexSignal input;
      if (!c.input_path.empty()) {
        input = load_signal(c.input_path);
      } else {
        input = load_or_make(c).input;
      }
      const SimGrid grid = SimGrid::make(c.fiber.length, c.num_layers, input.size(), input.tau);
      const auto rows = stability_probe(input, c.fiber, c.stability_deltas, grid, c.threads);
      auto os = out.open("stability.csv");
      write_stability_csv(os, rows);
      summary = {{"rows", rows.size()}};
      break;
    }
  }

  result.outputs = out.written();
  result.summary = summary.dump();

  json manifest;
  manifest["build"] = build_id();
  manifest["config"] = to_json(c);
  json names = json::array();
  for (const auto& p : result.outputs) names.push_back(p.filename().string());
  manifest["outputs"] = names;
  manifest["exit_code"] = result.exit_code;
  manifest["started_utc"] = started;
  manifest["wall_clock_s"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::ofstream ms(out.dir() / "manifest.json");
  if (!ms) throw std::runtime_error("cannot write manifest.json");
  ms << manifest.dump(2) << '\n';
  return result;
}

}  // namespace nlsnet
