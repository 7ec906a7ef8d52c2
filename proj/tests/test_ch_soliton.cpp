#include <doctest.h>

#include <cmath>
#include <random>

#include "fch/ch_soliton.hpp"
#include "fch/errors.hpp"
#include "fch/solitary.hpp"
#include "support.hpp"

using namespace fch;

TEST_CASE("parameter validation") {
  CHECK_THROWS_AS(ChSolitonParams(2.0, 0.0), InvalidArgument);
  CHECK_THROWS_AS(ChSolitonParams(1.0, 0.6), InvalidArgument);
  CHECK_THROWS_AS(ChSolitonParams(1.2, 0.6), InvalidArgument);
  const ChSolitonParams p(2.0, 0.6);
  CHECK(p.theta0() == doctest::Approx(std::atanh(std::sqrt(1.0 - 0.6))));
  CHECK(p.amplitude() == doctest::Approx(0.8));
}

TEST_CASE("xi(theta)") {
  const ChSolitonParams p(2.0, 0.6);
  CHECK(xi_of_theta(0.0, p) == 0.0);

  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> dist(-40.0, 40.0);
  for (int i = 0; i < 200; ++i) {
    const double t = dist(rng);
    CHECK(xi_of_theta(-t, p) == doctest::Approx(-xi_of_theta(t, p)).epsilon(1e-14));
  }

  // the log term saturates at -2 theta0, leaving the linear slope
  const double inc = (xi_of_theta(60.0, p) - xi_of_theta(50.0, p)) / 10.0;
  CHECK(inc == doctest::Approx(p.slope()).epsilon(1e-14));
  CHECK(xi_of_theta(500.0, p) == doctest::Approx(500.0 * p.slope() - 2.0 * p.theta0()).epsilon(1e-14));

  double prev = xi_of_theta(-20.0, p);
  for (int i = 1; i <= 40000; ++i) {
    const double cur = xi_of_theta(-20.0 + i * 1e-3, p);
    CHECK(cur > prev);
    prev = cur;
  }
}

TEST_CASE("Q(theta)") {
  const ChSolitonParams p(2.0, 0.6);
  CHECK(q_of_theta(0.0, p) == doctest::Approx(0.8).epsilon(1e-15));
  CHECK(q_of_theta(40.0, p) < 1e-30);
  CHECK(q_of_theta(-40.0, p) < 1e-30);
  CHECK(q_of_theta(800.0, p) == 0.0);
  for (double t : {0.1, 0.7, 3.0}) CHECK(q_of_theta(t, p) == q_of_theta(-t, p));
}

TEST_CASE("inversion of xi") {
  const ChSolitonParams p(3.0, 0.4);
  for (double xi : {-250.0, -3.0, -1e-9, 0.0, 1e-9, 0.5, 7.0, 314.0}) {
    const double t = theta_of_xi(xi, p);
    CHECK(std::abs(xi_of_theta(t, p) - xi) <= 1e-12 * (1.0 + std::abs(xi)));
  }
}

TEST_CASE("sampled profile on the published grid") {
  const ChSolitonParams p(2.0, 0.6);
  const TorusGrid g(100.0, 1u << 16);
  const RealVector q = sample_on_grid(p, g);

  CHECK(std::abs(q[g.center_index()] - 0.8) <= 1e-10);
  CHECK(testing::max_abs(q) == doctest::Approx(0.8).epsilon(1e-12));
  double asym = 0.0;
  for (std::size_t i = 1; i < g.size(); ++i) asym = std::max(asym, std::abs(q[i] - q[g.mirror(i)]));
  CHECK(asym <= 1e-10);
  for (double v : q) CHECK(v > 0.0);
  CHECK(q[0] < 1e-14);

  // single peak: increasing up to the centre, decreasing after
  for (std::size_t i = 1; i <= g.center_index(); ++i) CHECK(q[i] >= q[i - 1]);
  for (std::size_t i = g.center_index() + 1; i < g.size(); ++i) CHECK(q[i] <= q[i - 1]);

  // (-c(1 - d_xx) + 2w) Q + 3/2 Q^2 = Q Q'' + 1/2 Q'^2, local form with spectral derivatives
  const auto qh = forward(g, q);
  const RealVector d1 = inverse(spectral_derivative(qh));
  const RealVector d2 = inverse(spectral_derivative(spectral_derivative(qh)));
  double res = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double lhs = -2.0 * (q[i] - d2[i]) + 1.2 * q[i] + 1.5 * q[i] * q[i];
    const double rhs = q[i] * d2[i] + 0.5 * d1[i] * d1[i];
    res = std::max(res, std::abs(lhs - rhs));
  }
  CHECK(res <= 1e-8);

  // the same wave through the solitary-wave residual at fractional order 2
  const SolitaryWaveProblem prob{2.0, 2.0, 1.2, 1.0 / 3.0, g};
  CHECK(residual_max_norm(q, prob) <= 1e-8);
}
