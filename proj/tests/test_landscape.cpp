// Copyright 2026 The nlsnet Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <Eigen/Eigenvalues>
#include <cmath>
#include <limits>
#include <numbers>

#include "nlsnet/errors.hpp"
#include "nlsnet/landscape.hpp"
#include "support.hpp"

using namespace nlsnet;
using nlsnet::testing::desk_data;
using nlsnet::testing::desk_spec;

namespace {

const Eigen::Vector2d kTruth{-21.6, 1.6};

OptimizerConfig quick_refine() {
  auto c = OptimizerConfig::defaults(Algorithm::gd_momentum);
  c.learning_rate = 1e-2;
  c.grad_tol = 1e-6;
  return c;
}

}  // namespace

TEST_SUITE("landscape") {
  TEST_CASE("grid spec") {
    const GridSpec s = GridSpec::around(FiberParams{}, 0.2, 3.0, 101);
    CHECK(s.beta_at(0) == doctest::Approx(-25.92));
    CHECK(s.beta_at(100) == doctest::Approx(-17.28));
    CHECK(s.gamma_at(0) == doctest::Approx(-3.2));
    CHECK(s.gamma_at(100) == doctest::Approx(6.4));
    CHECK(s.beta_at(50) == doctest::Approx(-21.6).epsilon(1e-14));
    CHECK(s.gamma_at(50) == doctest::Approx(1.6).epsilon(1e-14));
    GridSpec bad = s;
    bad.beta_range = {1.0, 1.0};
    CHECK_THROWS(bad.validate());
    bad = s;
    bad.gamma_points = 0;
    CHECK_THROWS(bad.validate());
  }

  TEST_CASE("single cell at the truth") {
    const Dataset& d = desk_data();
    const GridSpec one{{-21.6, -21.6}, {1.6, 1.6}, 1, 1};
    const LandscapeGrid g = scan_grid(d.input, d.target, d.grid, one, 1);
    REQUIRE(g.losses.size() == 1);
    CHECK(g.losses(0, 0) < 1e-12);
  }

  TEST_CASE("scan is independent of thread count, blow-ups are sentinels") {
    const Dataset& d = desk_data();
    GridSpec s{{-22.0, -21.0}, {1.0, 2.0}, 4, 3};
    const LandscapeGrid a = scan_grid(d.input, d.target, d.grid, s, 1);
    const LandscapeGrid b = scan_grid(d.input, d.target, d.grid, s, 3);
    CHECK(a.losses == b.losses);
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 3; ++j)
        CHECK(a.losses(i, j) == loss(NetworkParams{s.beta_at(i), s.gamma_at(j), d.grid}, d.input, d.target).value);

    const GridSpec wild{{-22.0, -21.0}, {1.0, 1e308}, 2, 2};
    const LandscapeGrid w = scan_grid(d.input, d.target, d.grid, wild, 2);
    CHECK(std::isinf(w.losses(0, 1)));
    CHECK(std::isinf(w.losses(1, 1)));
    REQUIRE(w.argmin().has_value());
    CHECK(w.argmin()->second == 0);
  }

  TEST_CASE("refining around the minimum does not raise it") {
    const Dataset& d = desk_data();
    const GridSpec coarse{{-22.1, -21.1}, {1.1, 2.3}, 5, 5};
    const LandscapeGrid g = scan_grid(d.input, d.target, d.grid, coarse, 0);
    const auto [i, j] = *g.argmin();
    const double db = (coarse.beta_range.second - coarse.beta_range.first) / 4;
    const double dg = (coarse.gamma_range.second - coarse.gamma_range.first) / 4;
    const double b0 = coarse.beta_at(i), g0 = coarse.gamma_at(j);
    const GridSpec fine{{b0 - db, b0 + db}, {g0 - dg, g0 + dg}, 5, 5};
    const LandscapeGrid f = scan_grid(d.input, d.target, d.grid, fine, 0);
    CHECK(f.losses.minCoeff() <= g.losses.minCoeff() + 1e-14);
  }

  TEST_CASE("connected components") {
    LandscapeGrid g;
    g.losses.resize(4, 5);
    g.losses << 0, 9, 9, 9, 0,
                0, 9, 0, 9, 0,
                9, 9, 0, 9, 9,
                1, 9, 9, 9, std::numeric_limits<double>::infinity();
    CHECK(g.count_components(0.5) == 3);
    CHECK(g.count_components(1.0) == 4);
    CHECK(g.count_components(100.0) == 1);
    CHECK(g.count_components(-1.0) == 0);
  }

  TEST_CASE("global minimum") {
    const Dataset& d = desk_data();
    LandscapeGrid none;
    none.spec = GridSpec{{-22.0, -21.0}, {1.0, 2.0}, 2, 2};
    none.losses = Eigen::MatrixXd::Constant(2, 2, std::numeric_limits<double>::infinity());
    CHECK_THROWS_AS(find_global_min(none, d.input, d.target, d.grid), NumericalError);

    // Argmin cell already stationary.
    const GridSpec centred{{-21.7, -21.5}, {1.5, 1.7}, 3, 3};
    const LandscapeGrid c = scan_grid(d.input, d.target, d.grid, centred, 0);
    const GlobalMinimum at = find_global_min(c, d.input, d.target, d.grid);
    CHECK(at.fit.history.iterations.size() == 1);
    CHECK((at.estimate - kTruth).norm() < 1e-12);

    const GridSpec off{{-22.4, -21.4}, {1.0, 2.4}, 3, 3};
    const LandscapeGrid o = scan_grid(d.input, d.target, d.grid, off, 0);
    const GlobalMinimum m = find_global_min(o, d.input, d.target, d.grid);
    CHECK(std::abs(m.estimate[0] - kTruth[0]) < 1e-4 * 21.6);
    CHECK(std::abs(m.estimate[1] - kTruth[1]) < 1e-4 * 1.6);
  }

  TEST_CASE("coarse model against a finer oracle is biased") {
    DataSpec spec = desk_spec();
    spec.oracle_layers = 4 * spec.model_layers;
    const Dataset d = make_dataset(spec);
    const GridSpec around{{-21.8, -21.4}, {1.4, 1.8}, 3, 3};
    const LandscapeGrid g = scan_grid(d.input, d.target, d.grid, around, 0);
    const GlobalMinimum m = find_global_min(g, d.input, d.target, d.grid);
    CHECK(m.loss > 0.0);
    CHECK((m.estimate - kTruth).norm() > 1e-4);
  }

  TEST_CASE("layer sweep: deeper models fit better") {
    DataSpec base = desk_spec();
    base.oracle_layers = 100;
    const auto pts = hyperparameter_sweep(SweepAxis::num_layers, {20, 40, 60, 80, 100}, base, quick_refine(), 0);
    REQUIRE(pts.size() == 5);
    for (std::size_t k = 1; k < pts.size(); ++k) {
      INFO("M=" << pts[k].value << " J*=" << pts[k].loss << " prev " << pts[k - 1].loss);
      CHECK(pts[k].value == pts[k - 1].value + 20);
      CHECK(pts[k].loss <= pts[k - 1].loss);
    }
    CHECK(pts.back().loss < 1e-12);
  }

  TEST_CASE("sampling sweep: finer models fit better") {
    DataSpec base = desk_spec();
    base.num_symbols = 20;
    base.zero_pad_per_side = 30;
    base.oracle_layers = 100;
    base.oracle_samples_per_symbol = 64;
    base.model_layers = 100;  // depth matches the oracle, so sampling is the only mismatch
    const auto pts = hyperparameter_sweep(SweepAxis::sampling_rate, {16, 32, 64}, base, quick_refine(), 0);
    REQUIRE(pts.size() == 3);
    for (std::size_t k = 1; k < pts.size(); ++k) {
      INFO("sps=" << pts[k].value << " J*=" << pts[k].loss << " prev " << pts[k - 1].loss);
      CHECK(pts[k].loss <= pts[k - 1].loss);
    }
  }

  TEST_CASE("sweep rejects bad input") {
    CHECK_THROWS(hyperparameter_sweep(SweepAxis::num_layers, {}, desk_spec(), quick_refine()));
    CHECK_THROWS(hyperparameter_sweep(SweepAxis::sampling_rate, {24}, desk_spec(), quick_refine()));
    CHECK(sweep_axis_from_string("num_symbols") == SweepAxis::num_symbols);
    CHECK_THROWS(sweep_axis_from_string("depth"));
  }

  TEST_CASE("minimizer statistics") {
    const std::vector<Eigen::Vector2d> same(7, Eigen::Vector2d(-21.59, 1.58));
    const MinimizerStats z = minimizer_stats(same, kTruth, 50);
    CHECK(z.covariance == Eigen::Matrix2d::Zero());
    CHECK(z.mean == same.front());
    CHECK(z.bias[0] == doctest::Approx(0.01));
    CHECK(z.n_ok == 7);

    // Two-pass oracle.
    const std::vector<Eigen::Vector2d> pts{{-21.59, 1.58}, {-21.61, 1.57}, {-21.6, 1.6}, {-21.595, 1.59}};
    Eigen::Vector2d mean = Eigen::Vector2d::Zero();
    for (const auto& p : pts) mean += p / 4.0;
    Eigen::Matrix2d cov = Eigen::Matrix2d::Zero();
    for (const auto& p : pts) cov += (p - mean) * (p - mean).transpose() / 3.0;
    const MinimizerStats s = minimizer_stats(pts, kTruth, 100);
    CHECK((s.mean - mean).norm() < 1e-14);
    CHECK((s.covariance - cov).norm() < 1e-16);
    CHECK(s.covariance(0, 1) == s.covariance(1, 0));
    CHECK((s.bias - (mean - kTruth).cwiseAbs()).norm() < 1e-14);
  }

  TEST_CASE("bias-variance harness") {
    DataSpec base = desk_spec();
    base.zero_pad_per_side = 30;
    base.oracle_layers = 60;
    BiasVarianceConfig cfg;
    cfg.seeds_per_group = 3;
    cfg.ns_values = {10, 20};
    cfg.start = kTruth;
    const auto stats = bias_variance_experiment(cfg, base, quick_refine(), 0);
    REQUIRE(stats.size() == 2);
    for (std::size_t g = 0; g < stats.size(); ++g) {
      CHECK(stats[g].ns == cfg.ns_values[g]);
      CHECK(stats[g].group_size == 3);
      CHECK(stats[g].n_ok + stats[g].n_excluded == 3);
      CHECK(stats[g].covariance == stats[g].covariance.transpose());
      Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(stats[g].covariance);
      CHECK(es.eigenvalues().minCoeff() >= -1e-18);
      CHECK(stats[g].covariance(1, 1) > 0.0);
    }
    const auto again = bias_variance_experiment(cfg, base, quick_refine(), 1);
    CHECK(again[1].covariance == stats[1].covariance);

    cfg.seeds_per_group = 1;
    CHECK_THROWS(bias_variance_experiment(cfg, base, quick_refine()));
  }

  TEST_CASE("stability probe") {
    const Dataset& d = desk_data();
    const auto rows = stability_probe(d.input, FiberParams{}, {{0, 0}, {0.1, 0}, {0.2, 0}, {0.4, 0}}, d.grid);
    CHECK(rows[0].distance == 0.0);
    CHECK(rows[1].distance > 0.0);
    CHECK(rows[2].distance > rows[1].distance);
    CHECK(rows[3].distance > rows[2].distance);

    // Constant-modulus tone: the Kerr step is a global phase.
    const Eigen::Index n = 512;
    ComplexSignal tone{ComplexVector(n), 0.5};
    for (Eigen::Index k = 0; k < n; ++k) tone.samples[k] = std::polar(0.1, 2 * std::numbers::pi * 5 * k / double(n));
    const SimGrid g = SimGrid::make(80.0, 10, n, 0.5);
    const auto sym = stability_probe(tone, FiberParams{}, {{0, 0.3}, {0, -0.3}}, g);
    CHECK(sym[0].distance == doctest::Approx(sym[1].distance).epsilon(1e-12));
    CHECK(sym[0].distance > 0.0);

    CHECK_THROWS(stability_probe(d.input, FiberParams{}, {{std::nan(""), 0}}, d.grid));
  }
}
