#include "fch/ch_soliton.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "fch/errors.hpp"

namespace fch {

namespace {

// ln cosh(x) without overflow.
double log_cosh(double x) {
  const double a = std::abs(x);
  return a + std::log1p(std::exp(-2.0 * a)) - std::numbers::ln2;
}

}  // namespace

ChSolitonParams::ChSolitonParams(double speed, double omega) : c_(speed), omega_(omega) {
  if (!(omega > 0.0) || !(speed > 2.0 * omega))
    throw InvalidArgument("CH soliton needs omega > 0 and c > 2 omega (c=" + std::to_string(speed) +
                          ", omega=" + std::to_string(omega) + ")");
  theta0_ = std::atanh(std::sqrt(1.0 - 2.0 * omega / speed));
  slope_ = std::sqrt(4.0 * speed / (speed - 2.0 * omega));
}

double xi_of_theta(double theta, const ChSolitonParams& p) {
  return p.slope() * theta + log_cosh(theta - p.theta0()) - log_cosh(theta + p.theta0());
}

double q_of_theta(double theta, const ChSolitonParams& p) {
  // sech^2 / (sech^2 + r tanh^2) = 1 / (1 + r sinh^2)
  const double s = std::sinh(theta);
  const double r = 2.0 * p.omega() / p.speed();
  return p.amplitude() / (1.0 + r * s * s);
}

double theta_of_xi(double xi, const ChSolitonParams& p) {
  const double target = std::abs(xi);
  // The log term lies in [-2 theta0, 0] for theta >= 0, which brackets the root.
  if (!std::isfinite(target)) throw NoConvergence("theta bracket failed for xi=" + std::to_string(xi));
  double lo = target / p.slope();
  double hi = (target + 2.0 * p.theta0()) / p.slope() + 1e-12;
  if (xi_of_theta(lo, p) > target) lo = 0.0;
  while (xi_of_theta(hi, p) < target) hi *= 2.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (xi_of_theta(mid, p) < target) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  const double theta = 0.5 * (lo + hi);
  return xi < 0.0 ? -theta : theta;
}

RealVector sample_on_grid(const ChSolitonParams& params, const TorusGrid& grid) {
  const auto x = grid.nodes();
  RealVector q(x.size());
  const auto n = static_cast<std::ptrdiff_t>(x.size());
  bool ok = true;
#pragma omp parallel for schedule(static) reduction(&& : ok)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    try {
      q[i] = q_of_theta(theta_of_xi(x[i], params), params);
    } catch (const Error&) {
      ok = false;
    }
  }
  if (!ok) throw NoConvergence("CH soliton sampling: theta inversion failed on the grid");
  return q;
}

}  // namespace fch
