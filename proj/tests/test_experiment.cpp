// Copyright 2026 The nlsnet Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

#include "nlsnet/errors.hpp"
#include "nlsnet/experiment.hpp"
#include "nlsnet/io.hpp"

using namespace nlsnet;
using json = nlohmann::json;
namespace fs = std::filesystem;

#ifndef NLSNET_CLI
#define NLSNET_CLI "nlsnet"
#endif

namespace {

std::string config_error_path(const json& raw) {
  try {
    validate_config(raw);
  } catch (const ConfigError& e) {
    return e.path();
  }
  return "<accepted>";
}

json desk(const std::string& scenario, const fs::path& out) {
  json j = {{"scenario", scenario}, {"output_dir", out.string()}, {"threads", 1}};
  j["pulse"] = {{"samples_per_symbol", 16}};
  j["symbols"] = {{"num_symbols", 50}};
  j["grid"] = {{"num_layers", 20}};
  return j;
}

std::string slurp(const fs::path& p) {
  std::ifstream is(p);
  std::stringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

int cli(const std::string& args) {
  const int status = std::system((std::string(NLSNET_CLI) + " " + args + " >/dev/null 2>&1").c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("nlsnet_test_" + name);
  fs::remove_all(p);
  return p;
}

}  // namespace

TEST_SUITE("experiment") {
  TEST_CASE("defaults") {
    const ExperimentConfig c = validate_config({{"scenario", "fit"}});
    CHECK(c.scenario == Scenario::fit);
    CHECK(c.pulse.symbol_period == 10.0);
    CHECK(c.pulse.samples_per_symbol == 64);
    CHECK(c.pulse.rolloff == 0.1);
    CHECK(c.num_symbols == 200);
    CHECK(c.zero_pad_per_side == 70);
    CHECK(c.num_layers == 100);
    CHECK(c.fiber.length == 80.0);
    CHECK(c.fiber.beta == -21.6);
    CHECK(c.fiber.gamma == 1.6);
    CHECK(c.start == Eigen::Vector2d(-23.0, 10.0));
    CHECK(c.snr == 200.0);
    CHECK_FALSE(c.noise_enabled);
    CHECK(c.optimizer.algorithm == Algorithm::adam);
    CHECK(c.optimizer.loss_tol == 1e-10);
    CHECK(c.scan.beta_points == 101);

    const ExperimentConfig noisy = validate_config({{"scenario", "fit"}, {"noise", {{"enabled", true}}}});
    CHECK(noisy.optimizer.loss_tol == 1e-6);
  }

  TEST_CASE("config errors carry the field path") {
    CHECK(config_error_path({{"scenario", "fit"}, {"pulse", {{"rolloff_rho", 1.5}}}}) == "pulse.rolloff_rho");
    CHECK(config_error_path({{"scenario", "fit"}, {"pulse", {{"colour", 1}}}}) == "pulse.colour");
    CHECK(config_error_path({{"scenario", "fit"}, {"extra", 1}}) == "extra");
    CHECK(config_error_path(json::object()) == "scenario");
    CHECK(config_error_path({{"scenario", "dance"}}) == "scenario");
    CHECK(config_error_path({{"scenario", "fit"}, {"optimizer", {{"algorithm", "sgd"}}}}) == "optimizer.algorithm");
    CHECK(config_error_path({{"scenario", "fit"}, {"optimizer", {{"beta2", 1.0}}}}) == "optimizer.beta2");
    CHECK(config_error_path({{"scenario", "fit"}, {"grid", {{"num_layers", 2.5}}}}) == "grid.num_layers");
    CHECK(config_error_path({{"scenario", "fit"}, {"fit", {{"start", {1.0}}}}}) == "fit.start");
    CHECK(config_error_path({{"scenario", "scan"}, {"scan", {{"beta_range", {2.0, 1.0}}}}}) == "scan.beta_range");
    CHECK(config_error_path({{"scenario", "estimate_alpha"}}) == "io.input");
    CHECK(config_error_path({{"scenario", "fit"}, {"noise", {{"snr", -1}}}}) == "noise.snr");
    CHECK(config_error_path({{"scenario", "sweep"}, {"sweep", {{"axis", "sampling_rate"}, {"values", {24}}}}}) ==
          "sweep.values");
  }

  TEST_CASE("resolved config round-trips") {
    json raw = {{"scenario", "bias-variance"}, {"noise", {{"snr", "inf"}}}, {"optimizer", {{"algorithm", "rmsprop"}}}};
    const ExperimentConfig c = validate_config(raw);
    CHECK(c.scenario == Scenario::bias_variance);
    CHECK(c.optimizer.learning_rate == OptimizerConfig::defaults(Algorithm::rmsprop).learning_rate);
    const json once = to_json(c);
    CHECK(to_json(validate_config(once)) == once);
  }

  TEST_CASE("overrides") {
    json raw = json::object();
    apply_override(raw, "pulse.rolloff_rho=0.25");
    apply_override(raw, "optimizer.algorithm=adadelta");
    apply_override(raw, "fit.start=[-22,3]");
    apply_override(raw, "scenario=fit");
    const ExperimentConfig c = validate_config(raw);
    CHECK(c.pulse.rolloff == 0.25);
    CHECK(c.optimizer.algorithm == Algorithm::adadelta);
    CHECK(c.start == Eigen::Vector2d(-22.0, 3.0));
    CHECK_THROWS_AS(apply_override(raw, "no_equals_sign"), ConfigError);
    CHECK_THROWS_AS(apply_override(raw, "pulse.rolloff_rho.x=1"), ConfigError);
  }

  TEST_CASE("fit run writes history and manifest") {
    const fs::path out = scratch("fit");
    const RunResult r = run(validate_config(desk("fit", out)));
    CHECK(r.exit_code == 0);
    std::ifstream hs(out / "history.csv");
    const auto rows = read_history_csv(hs);
    REQUIRE_FALSE(rows.empty());
    CHECK(rows.back().loss < 1e-10);
    CHECK(rows.back().e_beta.has_value());

    const json manifest = json::parse(slurp(out / "manifest.json"));
    CHECK(manifest["build"] == build_id());
    CHECK(manifest["config"] == to_json(validate_config(desk("fit", out))));
    CHECK(manifest["wall_clock_s"].get<double>() > 0.0);
    CHECK(manifest["outputs"].size() == 2);
  }

  TEST_CASE("3x3 scan around the truth") {
    const fs::path out = scratch("scan");
    json cfg = desk("scan", out);
    cfg["scan"] = {{"beta_range", {-21.7, -21.5}}, {"gamma_range", {1.5, 1.7}}, {"beta_points", 3},
                   {"gamma_points", 3}, {"refine_min", false}};
    run(validate_config(cfg));
    std::ifstream ls(out / "landscape.csv");
    const auto rows = read_landscape_csv(ls);
    REQUIRE(rows.size() == 9);
    for (std::size_t k = 0; k < rows.size(); ++k)
      if (k != 4) CHECK(rows[k].loss > rows[4].loss);
  }

  TEST_CASE("generate, propagate, estimate-alpha") {
    const fs::path gen = scratch("gen"), prop = scratch("prop"), est = scratch("alpha");
    run(validate_config(desk("generate", gen)));
    json p = desk("propagate", prop);
    p["io"] = {{"input", (gen / "input.json").string()}};
    run(validate_config(p));
    CHECK(slurp(prop / "output.json") == slurp(gen / "target.json"));

    json a = desk("estimate_alpha", est);
    a["io"] = {{"input", (gen / "input.json").string()}, {"target", (prop / "output.json").string()}};
    const RunResult r = run(validate_config(a));
    const json alpha = json::parse(r.summary);
    CHECK(std::abs(alpha["alpha_per_km"].get<double>()) < 1e-9);
    CHECK(json::parse(slurp(est / "alpha.json")) == alpha);

    const fs::path lossy = scratch("lossy");
    json g = desk("generate", lossy);
    g["fiber"] = {{"alpha_per_km", 0.046}};
    run(validate_config(g));
    a["io"] = {{"input", (lossy / "input.json").string()}, {"target", (lossy / "target.json").string()}};
    CHECK(std::abs(json::parse(run(validate_config(a)).summary)["alpha_per_km"].get<double>() - 0.046) < 1e-9);
  }

  TEST_CASE("grad-check and stability scenarios") {
    const fs::path gc = scratch("gc"), sp = scratch("sp");
    json g = desk("grad_check", gc);
    g["grad_check"] = {{"points", {{-22.0, 2.0}}}};
    const RunResult r = run(validate_config(g));
    CHECK(json::parse(r.summary)["max_rel_err"].get<double>() < 1e-5);
    run(validate_config(desk("stability_probe", sp)));
    std::ifstream ss(sp / "stability.csv");
    std::string header;
    std::getline(ss, header);
    CHECK(header == "d_beta,d_gamma,distance");
  }

  TEST_CASE("command line") {
    const fs::path out = scratch("cli");
    const std::string desk_flags =
        "--set pulse.samples_per_symbol=16 --set symbols.num_symbols=50 --set grid.num_layers=20 --threads 1";
    CHECK(cli("fit " + desk_flags + " --out " + out.string()) == 0);
    CHECK(fs::exists(out / "history.csv"));
    CHECK(fs::exists(out / "manifest.json"));
    CHECK(cli("fit --set pulse.rolloff_rho=1.5 --out " + out.string()) == 2);
    CHECK(cli("fit --set nonsense=1 --out " + out.string()) == 2);
    CHECK(cli("fit --config /nonexistent.json --out " + out.string()) == 2);
    CHECK(cli("frobnicate") == 2);
    // An enormous learning rate diverges: history is written, exit code 3.
    CHECK(cli("fit " + desk_flags + " --set optimizer.algorithm=gd_momentum --set optimizer.learning_rate=1e300 " +
              "--out " + out.string()) == 3);
    CHECK(fs::exists(out / "history.csv"));

    const fs::path cfg = scratch("cfg.json");
    std::ofstream(cfg) << R"({"pulse": {"samples_per_symbol": 16}, "symbols": {"num_symbols": 50},
                             "grid": {"num_layers": 20}, "seed": 3})";
    const fs::path a = scratch("cli_a");
    CHECK(cli("generate --config " + cfg.string() + " --seed 4 --out " + a.string()) == 0);
    CHECK(json::parse(slurp(a / "manifest.json"))["config"]["seed"] == 4);
  }
}
