// Copyright 2026 The nlsnet Authors
// SPDX-License-Identifier: Apache-2.0

// Command-line front end. One subcommand per scenario; the config file is
// optional and any leaf can be overridden with --set path=value.

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <string>
#include <utility>
#include <vector>

#include "nlsnet/errors.hpp"
#include "nlsnet/experiment.hpp"

namespace {

constexpr int kConfigError = 2;
constexpr int kNumericalError = 3;

struct Options {
  std::string config;
  std::vector<std::string> sets;
  std::string out;
  int threads = -1;
  long long seed = -1;
};

nlohmann::json load_raw(const Options& o, const std::string& scenario) {
  nlohmann::json raw = nlohmann::json::object();
  if (!o.config.empty()) {
    std::ifstream is(o.config);
    if (!is) throw nlsnet::ConfigError("", "cannot read config file " + o.config);
    raw = nlohmann::json::parse(is, nullptr, false);
    if (raw.is_discarded()) throw nlsnet::ConfigError("", "config file is not valid JSON: " + o.config);
    if (!raw.is_object()) throw nlsnet::ConfigError("", "config must be a JSON object");
  }
  raw["scenario"] = scenario;
  for (const auto& s : o.sets) nlsnet::apply_override(raw, s);
  if (!o.out.empty()) raw["output_dir"] = o.out;
  if (o.threads >= 0) raw["threads"] = o.threads;
  if (o.seed >= 0) raw["seed"] = o.seed;
  return raw;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"nlsnet: fiber channel simulation and (beta, gamma) estimation"};
  app.require_subcommand(1);
  Options opt;

  const std::pair<const char*, const char*> commands[] = {
      {"generate", "synthesize a transmitted/received signal pair"},
      {"propagate", "run the forward model on a signal"},
      {"scan", "evaluate the loss on a (beta, gamma) grid"},
      {"fit", "estimate (beta, gamma) with a gradient optimizer"},
      {"sweep", "minimal loss versus depth, sampling rate or symbol count"},
      {"bias-variance", "minimizer statistics over random symbol sequences"},
      {"estimate-alpha", "closed-form attenuation from an input/output pair"},
      {"grad-check", "compare analytic and finite-difference gradients"},
      {"stability-probe", "output distance under parameter perturbations"},
  };
  for (const auto& [name, help] : commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("--config", opt.config, "JSON config file");
    sub->add_option("--set", opt.sets, "override a config leaf, e.g. --set pulse.rolloff_rho=0.2")
        ->allow_extra_args(false);
    sub->add_option("--out", opt.out, "output directory");
    sub->add_option("--threads", opt.threads, "worker threads (0: all cores)")->check(CLI::NonNegativeNumber);
    sub->add_option("--seed", opt.seed, "master seed")->check(CLI::NonNegativeNumber);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kConfigError;
  }

  const std::string scenario = app.get_subcommands().front()->get_name();
  try {
    const nlsnet::ExperimentConfig config = nlsnet::validate_config(load_raw(opt, scenario));
    const nlsnet::RunResult r = nlsnet::run(config);
    std::cout << r.summary << std::endl;
    return r.exit_code;
  } catch (const nlsnet::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const nlsnet::NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kNumericalError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
