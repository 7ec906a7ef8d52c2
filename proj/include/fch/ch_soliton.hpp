#pragma once

// Smooth solitary wave of the Camassa-Holm equation (fractional order 2,
// kappa1 = 2 omega, kappa2 = 1/3), given in parametric form
//
//   Q(theta)  = (c - 2w) sech^2(theta) / (sech^2(theta) + 2 (w/c) tanh^2(theta))
//   xi(theta) = sqrt(4c/(c - 2w)) theta + ln(cosh(theta - theta0) / cosh(theta + theta0))
//
// with theta0 = artanh(sqrt(1 - 2w/c)).

#include "fch/grid.hpp"

namespace fch {

class ChSolitonParams {
 public:
  /// Requires omega > 0 and speed > 2 omega; throws InvalidArgument otherwise.
  ChSolitonParams(double speed, double omega);

  double speed() const noexcept { return c_; }
  double omega() const noexcept { return omega_; }
  double theta0() const noexcept { return theta0_; }
  /// Asymptotic slope sqrt(4c/(c - 2w)) of xi(theta).
  double slope() const noexcept { return slope_; }
  double amplitude() const noexcept { return c_ - 2.0 * omega_; }

 private:
  double c_;
  double omega_;
  double theta0_;
  double slope_;
};

double xi_of_theta(double theta, const ChSolitonParams& params);
double q_of_theta(double theta, const ChSolitonParams& params);

/// Inverts xi(theta) = xi by bisection (xi is odd and strictly increasing).
double theta_of_xi(double xi, const ChSolitonParams& params);

/// Profile Q(x_n) centred at x = 0.
RealVector sample_on_grid(const ChSolitonParams& params, const TorusGrid& grid);

}  // namespace fch
