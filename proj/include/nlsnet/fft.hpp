// Copyright 2026 The nlsnet Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Core>

#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <span>
#include <vector>

namespace nlsnet {

using Complex = std::complex<double>;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

// Forward transform is unnormalized, inverse carries the 1/N factor.
// Plans are cached per length and direction; an Fft instance must not be
// shared across threads, but separate instances may run concurrently.
class Fft {
 public:
  Fft() = default;
  Fft(const Fft&) = delete;
  Fft& operator=(const Fft&) = delete;
  ~Fft();

  void forward(ComplexVector& dst, const ComplexVector& src);
  void inverse(ComplexVector& dst, const ComplexVector& src);

  ComplexVector forward(const ComplexVector& src) {
    ComplexVector dst(src.size());
    forward(dst, src);
    return dst;
  }
  ComplexVector inverse(const ComplexVector& src) {
    ComplexVector dst(src.size());
    inverse(dst, src);
    return dst;
  }

 private:
  struct Plan {
    Eigen::Index size;
    int sign;
    void* handle;
  };
  void* plan_for(Eigen::Index size, int sign);

  std::vector<Plan> plans_;
};

/// Angular frequencies of an n-point DFT with sample spacing tau, in the
/// usual order: 0, 1, ..., ceil(n/2)-1, then the negative half.
inline RealVector angular_frequencies(Eigen::Index n, double tau) {
  RealVector omega(n);
  const double scale = 2.0 * std::numbers::pi / (static_cast<double>(n) * tau);
  const Eigen::Index half = (n + 1) / 2;
  for (Eigen::Index k = 0; k < n; ++k) {
    const Eigen::Index idx = k < half ? k : k - n;
    omega[k] = scale * static_cast<double>(idx);
  }
  return omega;
}

/// Pairwise (cascade) summation; error grows as O(log n) instead of O(n).
inline double pairwise_sum(std::span<const double> values) {
  if (values.size() <= 8) {
    double s = 0.0;
    for (double v : values) s += v;
    return s;
  }
  const std::size_t mid = values.size() / 2;
  return pairwise_sum(values.first(mid)) + pairwise_sum(values.subspan(mid));
}

inline double pairwise_sum(const RealVector& values) {
  return pairwise_sum(std::span<const double>(values.data(), static_cast<std::size_t>(values.size())));
}

/// Squared Euclidean norm with pairwise accumulation.
inline double squared_norm(const ComplexVector& v) {
  return pairwise_sum(RealVector(v.cwiseAbs2()));
}

inline bool all_finite(const ComplexVector& v) {
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (!std::isfinite(v[i].real()) || !std::isfinite(v[i].imag())) return false;
  }
  return true;
}

}  // namespace nlsnet
