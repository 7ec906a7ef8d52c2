#pragma once

#include <algorithm>
#include <cmath>
#include <random>
#include <span>

#include "fch/grid.hpp"

namespace fch::testing {

inline double max_abs_diff(std::span<const double> a, std::span<const double> b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

inline double max_abs(std::span<const double> a) {
  double m = 0.0;
  for (double v : a) m = std::max(m, std::abs(v));
  return m;
}

inline double max_abs_diff(std::span<const Complex> a, std::span<const Complex> b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

/// White noise in [-1, 1] at every node.
inline RealVector random_field(std::size_t n, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  RealVector u(n);
  for (auto& v : u) v = dist(rng);
  return u;
}

/// Smooth random field: random coefficients on the lowest `modes` wavenumbers.
inline RealVector smooth_random_field(const TorusGrid& g, unsigned seed, int modes = 12) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> dist(0.0, 1.0);
  RealVector u(g.size(), 0.0);
  const auto x = g.nodes();
  const double L = g.half_period();
  for (int m = 1; m <= modes; ++m) {
    const double a = dist(rng) / m, b = dist(rng) / m;
    for (std::size_t i = 0; i < u.size(); ++i) u[i] += a * std::cos(m * x[i] / L) + b * std::sin(m * x[i] / L);
  }
  return u;
}

}  // namespace fch::testing
