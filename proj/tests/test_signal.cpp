// Copyright 2026 The nlsnet Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>

#include "nlsnet/signal.hpp"

using namespace nlsnet;
using std::numbers::pi;

namespace {

// h(t) by direct quadrature of the spectrum: 2 * int_0^{fmax} H(f) cos(2 pi f t) df.
double impulse_by_quadrature(double t, const PulseSpec& p) {
  const double fmax = (1.0 + p.rolloff) / (2.0 * p.symbol_period);
  const int n = 20000;  // even, Simpson
  const double h = fmax / n;
  double s = 0.0;
  for (int k = 0; k <= n; ++k) {
    const double f = k * h;
    const double w = (k == 0 || k == n) ? 1.0 : (k % 2 ? 4.0 : 2.0);
    s += w * rrc_frequency_response(f, p) * std::cos(2.0 * pi * f * t);
  }
  return 2.0 * s * h / 3.0;
}

}  // namespace

TEST_SUITE("signal") {
  TEST_CASE("rrc spectrum branches") {
    const PulseSpec p;
    const double ts = p.symbol_period, rho = p.rolloff;
    CHECK(rrc_frequency_response(0.0, p) == 1.0);
    CHECK(rrc_frequency_response((1 + rho) / (2 * ts) + 1e-6, p) == 0.0);
    CHECK(rrc_frequency_response(1.0, p) == 0.0);
    CHECK(rrc_frequency_response((1 - rho) / (2 * ts), p) == doctest::Approx(1.0).epsilon(1e-15));

    for (double seam : {(1 - rho) / (2 * ts), (1 + rho) / (2 * ts)}) {
      const double d = 1e-13 * seam;
      CHECK(std::abs(rrc_frequency_response(seam - d, p) - rrc_frequency_response(seam + d, p)) < 1e-12);
    }
    for (int k = -200; k <= 200; ++k) {
      const double f = k * 1e-3;
      const double v = rrc_frequency_response(f, p);
      CHECK(v == rrc_frequency_response(-f, p));
      CHECK(v >= 0.0);
      CHECK(v <= 1.0);
    }
  }

  TEST_CASE("rrc impulse is the inverse transform of the spectrum") {
    for (double rho : {0.1, 0.35, 1.0}) {
      PulseSpec p;
      p.rolloff = rho;
      const double h0 = rrc_impulse_response(0.0, p);
      CHECK(h0 == doctest::Approx((1 - rho + 4 * rho / pi) / p.symbol_period).epsilon(1e-14));
      const double singular = p.symbol_period / (4 * rho);
      for (double t : {0.0, 0.37, 3.1, singular, 10.0, 17.5, 55.0, -singular}) {
        INFO("rho=" << rho << " t=" << t);
        CHECK(std::abs(rrc_impulse_response(t, p) - impulse_by_quadrature(t, p)) < 1e-9 * h0);
      }
    }
  }

  TEST_CASE("rrc impulse is even and decays") {
    const PulseSpec p;
    for (int k = 0; k < 400; ++k) {
      const double t = k * p.sample_period() * 0.73;
      CHECK(rrc_impulse_response(t, p) == rrc_impulse_response(-t, p));
    }
    CHECK(std::abs(rrc_impulse_response(1e4 * p.symbol_period, p)) < 1e-6 * rrc_impulse_response(0.0, p));
  }

  TEST_CASE("rrc pairs to a Nyquist pulse") {
    const PulseSpec p;
    const double dt = p.symbol_period / 64;
    const int span = 400 * 64;
    double self = 0.0;
    double shifted[3] = {0.0, 0.0, 0.0};
    for (int k = -span; k <= span; ++k) {
      const double t = k * dt;
      const double h = rrc_impulse_response(t, p);
      self += h * h * dt;
      for (int m = 1; m <= 3; ++m) shifted[m - 1] += h * rrc_impulse_response(t - m * p.symbol_period, p) * dt;
    }
    for (double s : shifted) CHECK(std::abs(s) < 1e-3 * self);
  }

  TEST_CASE("symbols: determinism, membership, padding") {
    const Constellation qam = Constellation::qam16();
    CHECK(qam.points.size() == 16);
    for (int re : {-3, -1, 1, 3})
      for (int im : {-3, -1, 1, 3})
        CHECK(std::count(qam.points.begin(), qam.points.end(), Complex(re, im)) == 1);

    const auto a = generate_symbols(500, qam, 7, 5);
    const auto b = generate_symbols(500, qam, 7, 5);
    const auto c = generate_symbols(500, qam, 8, 5);
    CHECK(a.symbols == b.symbols);
    CHECK(a.symbols != c.symbols);
    for (auto s : a.symbols) CHECK(std::count(qam.points.begin(), qam.points.end(), s) == 1);

    const auto framed = a.padded();
    REQUIRE(framed.size() == 510);
    for (int k = 0; k < 5; ++k) {
      CHECK(framed[k] == Complex(0.0));
      CHECK(framed[framed.size() - 1 - k] == Complex(0.0));
    }

    const auto one = generate_symbols(50, Constellation{{Complex(2, -1)}}, 3);
    for (auto s : one.symbols) CHECK(s == Complex(2, -1));
    CHECK_THROWS(generate_symbols(5, Constellation{}, 1));
  }

  TEST_CASE("symbols are uniform over 16QAM") {
    const int n = 10000;
    const auto seq = generate_symbols(n, Constellation::qam16(), 2024);
    std::map<std::pair<double, double>, int> counts;
    for (auto s : seq.symbols) ++counts[{s.real(), s.imag()}];
    CHECK(counts.size() == 16);
    const double p = 1.0 / 16, mean = n * p, sigma = std::sqrt(n * p * (1 - p));
    double chi2 = 0.0;
    for (auto& [pt, k] : counts) {
      CHECK(std::abs(k - mean) < 3 * sigma);
      chi2 += (k - mean) * (k - mean) / mean;
    }
    CHECK(chi2 < 37.7);  // 99.9% quantile, 15 dof
  }

  TEST_CASE("modulate") {
    PulseSpec p;
    p.samples_per_symbol = 8;
    SymbolSequence one;
    one.symbols = {Complex(1, 1)};
    one.power = 1.0;
    const ComplexSignal s = modulate(one, p);
    REQUIRE(s.size() == 8);
    for (Eigen::Index n = 0; n < s.size(); ++n) {
      const Complex expect = Complex(1, 1) * rrc_impulse_response(n * p.sample_period() - p.symbol_period, p);
      CHECK(std::abs(s.samples[n] - expect) < 1e-15);
    }

    auto seq = generate_symbols(40, Constellation::qam16(), 3, 6, 1.0);
    const ComplexSignal base = modulate(seq, p);
    CHECK(base.size() == 52 * 8);
    CHECK(base.tau == p.sample_period());
    seq.power = 4.0;
    const ComplexSignal louder = modulate(seq, p);
    CHECK((louder.samples - 2.0 * base.samples).norm() < 1e-14 * base.samples.norm());

    auto zero = seq;
    std::fill(zero.symbols.begin(), zero.symbols.end(), Complex(0.0));
    CHECK(modulate(zero, p).samples.norm() == 0.0);

    auto other = generate_symbols(40, Constellation::qam16(), 4, 6, 4.0);
    auto sum = seq;
    for (std::size_t k = 0; k < sum.symbols.size(); ++k) sum.symbols[k] += other.symbols[k];
    const ComplexVector lin = modulate(seq, p).samples + modulate(other, p).samples;
    CHECK((modulate(sum, p).samples - lin).norm() < 1e-13 * lin.norm());
  }

  TEST_CASE("awgn") {
    PulseSpec p;
    p.samples_per_symbol = 16;
    const ComplexSignal clean = modulate(generate_symbols(200, Constellation::qam16(), 1, 70, 0.01), p);

    const ComplexSignal same = add_awgn(clean, NoiseSpec{});
    CHECK(same.samples == clean.samples);

    for (double snr : {2.0, 200.0, 1e5}) {
      const ComplexSignal noisy = add_awgn(clean, NoiseSpec{snr, 11});
      const double ratio = (noisy.samples - clean.samples).norm() / clean.samples.norm();
      CHECK(ratio == doctest::Approx(1.0 / snr).epsilon(1e-12));
    }
    const auto a = add_awgn(clean, NoiseSpec{50.0, 3});
    const auto b = add_awgn(clean, NoiseSpec{50.0, 3});
    CHECK(a.samples == b.samples);
    const double low = (add_awgn(clean, NoiseSpec{100.0, 3}).samples - clean.samples).norm();
    const double high = (add_awgn(clean, NoiseSpec{10.0, 3}).samples - clean.samples).norm();
    CHECK(low < high);

    CHECK_THROWS(add_awgn(clean, NoiseSpec{0.0, 1}));
    CHECK_THROWS(add_awgn(clean, NoiseSpec{-3.0, 1}));
    CHECK_THROWS(add_awgn(clean, NoiseSpec{std::nan(""), 1}));
  }

  TEST_CASE("matched filter") {
    PulseSpec p;
    p.samples_per_symbol = 16;
    const Eigen::Index n = 4096;
    ComplexSignal zero{ComplexVector::Zero(n), p.sample_period()};
    CHECK(matched_filter_denoise(zero, p).samples.norm() == 0.0);

    ComplexSignal dc{ComplexVector::Constant(n, Complex(0.3, -0.2)), p.sample_period()};
    CHECK((matched_filter_denoise(dc, p).samples - dc.samples).norm() < 1e-12 * dc.samples.norm());

    // Tone on an exact FFT bin above the stop-band edge.
    const double f_edge = (1 + p.rolloff) / (2 * p.symbol_period);
    const double df = 1.0 / (n * p.sample_period());
    const int bin = static_cast<int>(std::ceil(f_edge / df)) + 3;
    ComplexSignal tone{ComplexVector(n), p.sample_period()};
    for (Eigen::Index k = 0; k < n; ++k) tone.samples[k] = std::polar(1.0, 2 * pi * bin * k / double(n));
    CHECK(matched_filter_denoise(tone, p).samples.norm() < 1e-3 * tone.samples.norm());

    const ComplexSignal white = add_awgn(dc, NoiseSpec{1.0, 5});
    ComplexSignal noise{white.samples - dc.samples, dc.tau};
    CHECK(matched_filter_denoise(noise, p).samples.norm() < noise.samples.norm());
  }
}
