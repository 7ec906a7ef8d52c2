#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>

#include "fch/errors.hpp"
#include "fch/evolution.hpp"
#include "fch/solitary.hpp"
#include "support.hpp"

using namespace fch;
using fch::testing::max_abs;
using fch::testing::max_abs_diff;

namespace {

constexpr double kPi = std::numbers::pi;

EquationParams fch_eq(double alpha, double epsilon = 1.0) { return {alpha, 1.2, 1.0 / 3.0, epsilon, 1.0}; }

EvolutionConfig make_config(const EquationParams& eq, const TorusGrid& g, double t_end, std::size_t steps) {
  return EvolutionConfig{eq, g, t_end, steps, 10, {}};
}

RealVector gaussian(const TorusGrid& g, double amp) {
  RealVector u(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) u[i] = amp * std::exp(-g.nodes()[i] * g.nodes()[i]);
  return u;
}

const SolitarySolution& wave12() {
  static const SolitarySolution w = solitary_wave(TorusGrid(100.0, 1u << 12), {1.5, 2.0, 0.6});
  return w;
}

}  // namespace

TEST_CASE("config validation") {
  auto cfg = make_config(fch_eq(1.5), TorusGrid(5.0, 64), 1.0, 1000);
  CHECK_NOTHROW(cfg.validate());
  cfg.steps = 0;
  CHECK_THROWS_AS(cfg.validate(), InvalidArgument);
  cfg.steps = 10;
  cfg.t_end = 0.0;
  CHECK_THROWS_AS(cfg.validate(), InvalidArgument);
  cfg.t_end = 1.0;
  cfg.equation.epsilon = 0.0;
  CHECK_THROWS_AS(cfg.validate(), InvalidArgument);
  cfg.equation.epsilon = 1.5;
  CHECK_THROWS_AS(cfg.validate(), InvalidArgument);
}

TEST_CASE("conserved quantities of a single mode") {
  for (double L : {1.0, 3.0, 10.0}) {
    const TorusGrid g(L, 128);
    RealVector u(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) u[i] = std::cos(g.nodes()[i] / L);
    for (double alpha : {0.5, 1.0, 1.5, 2.0}) {
      CHECK(std::abs(conserved_mass(u, g)) <= 1e-12);
      const double expected = kPi * L * (1.0 + std::pow(L, -alpha));
      CHECK(conserved_energy(u, g, alpha) == doctest::Approx(expected).epsilon(1e-12));
    }
  }
  const TorusGrid g(3.0, 64);
  const RealVector zero(g.size(), 0.0);
  CHECK(conserved_mass(zero, g) == 0.0);
  CHECK(conserved_energy(zero, g, 1.5) == 0.0);

  // epsilon scales the fractional part only
  RealVector c(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) c[i] = std::cos(2.0 * g.nodes()[i] / 3.0);
  const double k = 2.0 / 3.0;
  CHECK(conserved_energy(c, g, 1.5, 0.1) ==
        doctest::Approx(kPi * 3.0 * (1.0 + std::pow(0.1 * k, 1.5))).epsilon(1e-12));
}

TEST_CASE("rhs") {
  SUBCASE("zero field") {
    const TorusGrid g(5.0, 64);
    const auto r = rhs(SpectralField(g), fch_eq(1.5));
    for (std::size_t j = 0; j < r.size(); ++j) CHECK(r[j] == Complex(0.0, 0.0));
  }

  SUBCASE("travelling-wave identity") {
    const auto& w = wave12();
    const auto ut = inverse(rhs(w.coeffs, fch_eq(1.5)));
    const auto qx = inverse(spectral_derivative(w.coeffs));
    double err = 0.0;
    for (std::size_t i = 0; i < ut.size(); ++i) err = std::max(err, std::abs(ut[i] + 2.0 * qx[i]));
    CHECK(err <= 1e-8);
  }

  SUBCASE("operator class and free function agree") {
    const TorusGrid g(5.0, 256);
    const auto uh = forward(g, gaussian(g, 0.7));
    FchOperator op(fch_eq(1.2, 0.5), g);
    ComplexVector out(g.size());
    op.rhs(uh.coeffs(), out);
    CHECK(max_abs_diff(out, rhs(uh, fch_eq(1.2, 0.5)).coeffs()) == 0.0);
  }
}

TEST_CASE("small-amplitude mode follows the linear dispersion relation") {
  const double L = 4.0;
  const TorusGrid g(L, 64);
  const int m = 3;
  const double k = m / L;
  RealVector u(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) u[i] = 1e-8 * std::cos(k * g.nodes()[i]);
  for (double eps : {1.0, 0.3}) {
    const auto eq = fch_eq(1.5, eps);
    auto cfg = make_config(eq, g, 2.0, 400);
    cfg.tail_stop = 0.0;
    const auto res = evolve(u, cfg);
    const Complex a0 = forward(g, u)[m];
    const Complex a1 = res.final_state[m];
    const double phase = std::arg(a1 / a0);
    const double speed = -phase / (k * cfg.t_end);
    const double expected = eq.kappa1 / (1.0 + std::pow(eps * k, 1.5));
    CHECK(speed == doctest::Approx(expected).epsilon(1e-6));
    CHECK(std::abs(a1) == doctest::Approx(std::abs(a0)).epsilon(1e-6));
  }
}

TEST_CASE("RK4 against the exact linear propagator") {
  const TorusGrid g(2.0, 64);
  const EquationParams eq{1.5, 1.2, 0.0, 1.0, 0.0};
  RealVector u0 = testing::smooth_random_field(g, 4, 6);
  const auto uh = forward(g, u0);
  const auto k = g.odd_wavenumbers();
  const auto ak = g.abs_wavenumbers();

  auto one_step_error = [&](double dt) {
    const auto stepped = rk4_step(uh, dt, eq);
    double err = 0.0;
    for (std::size_t j = 0; j < g.size(); ++j) {
      const double w = eq.kappa1 * k[j] / (1.0 + std::pow(ak[j], eq.alpha));
      const Complex exact = std::exp(Complex(0.0, -w * dt)) * uh[j];
      err = std::max(err, std::abs(stepped[j] - exact));
    }
    return err;
  };
  const double e1 = one_step_error(0.2), e2 = one_step_error(0.1);
  CHECK(e1 <= 1e-2 * std::pow(0.2, 5) * max_abs(std::span<const double>(u0)) * 1e3);
  // local error is O(dt^5)
  CHECK(std::log2(e1 / e2) == doctest::Approx(5.0).epsilon(0.05));

  SUBCASE("zero field") {
    const auto z = rk4_step(SpectralField(g), 0.1, fch_eq(1.5));
    for (std::size_t j = 0; j < z.size(); ++j) CHECK(z[j] == Complex(0.0, 0.0));
  }
}

TEST_CASE("RK4 global order on a smooth nonlinear run") {
  const TorusGrid g(10.0, 256);
  const RealVector u0 = gaussian(g, 0.5);
  auto run = [&](std::size_t steps) {
    auto cfg = make_config(fch_eq(1.5), g, 1.0, steps);
    cfg.tail_stop = 0.0;
    return inverse(evolve(u0, cfg).final_state);
  };
  const RealVector ref = run(1280);
  const double e1 = max_abs_diff(run(20), ref);
  const double e2 = max_abs_diff(run(40), ref);
  const double e3 = max_abs_diff(run(80), ref);
  const double p1 = std::log2(e1 / e2), p2 = std::log2(e2 / e3);
  CHECK(p1 >= 3.7);
  CHECK(p1 <= 4.3);
  CHECK(p2 >= 3.7);
  CHECK(p2 <= 4.3);
}

TEST_CASE("solitary wave propagation") {
  const auto& w = wave12();
  const auto& g = w.problem.grid;
  auto cfg = make_config(fch_eq(1.5), g, 0.5, 1000);
  cfg.monitor_stride = 50;
  cfg.snapshot_times = {0.25, 0.5};
  const auto res = evolve(w.profile, cfg);
  REQUIRE(res.stop == StopReason::completed);
  CHECK(res.final_time == doctest::Approx(0.5));
  CHECK(res.steps_taken == 1000);

  const auto shifted = inverse(translate(w.coeffs, 2.0 * 0.5));
  CHECK(max_abs_diff(inverse(res.final_state), shifted) <= 1e-8);

  const auto& m = res.monitors;
  CHECK(m.size() == 1000 / 50 + 1);
  CHECK(m.mass.size() == m.size());
  CHECK(m.energy.size() == m.size());
  CHECK(m.energy_drift.size() == m.size());
  CHECK(m.linf.size() == m.size());
  CHECK(m.tail.size() == m.size());
  for (std::size_t i = 0; i < m.size(); ++i) {
    CHECK(m.energy_drift[i] >= 0.0);
    CHECK(m.energy_drift[i] <= 1e-10);
    CHECK(std::abs(m.mass[i] - m.mass[0]) <= 1e-10 * std::abs(m.mass[0]));
    CHECK(m.tail[i] < 1e-6);
  }
  REQUIRE(res.snapshots.size() == 2);
  CHECK(res.snapshots[0].t == doctest::Approx(0.25));
  CHECK(res.snapshots[1].t == doctest::Approx(0.5));
  CHECK(res.final_state.hermitian_defect() <= 1e-12);
}

TEST_CASE("monitor callback sees every sample") {
  const TorusGrid g(5.0, 128);
  auto cfg = make_config(fch_eq(1.5), g, 0.1, 100);
  cfg.monitor_stride = 10;
  std::vector<double> seen;
  double peak = 0.0;
  const auto res = evolve(gaussian(g, 0.3), cfg, [&](double t, std::span<const double> u, const SpectralField& c) {
    seen.push_back(t);
    peak = std::max(peak, max_abs(u));
    CHECK(c.hermitian_defect() <= 1e-12);
  });
  REQUIRE(seen.size() == res.monitors.size());
  for (std::size_t i = 0; i < seen.size(); ++i) CHECK(seen[i] == res.monitors.t[i]);
  CHECK(peak > 0.2);
}

TEST_CASE("overflow truncates the run instead of throwing") {
  const TorusGrid g(3.0, 128);
  auto cfg = make_config(fch_eq(1.5), g, 40.0, 400);
  cfg.tail_stop = 0.0;
  std::optional<EvolutionResult> out;
  REQUIRE_NOTHROW(out.emplace(evolve(gaussian(g, 50.0), cfg)));
  const auto& res = *out;
  CHECK(res.stop == StopReason::non_finite);
  CHECK(res.truncated());
  CHECK(res.steps_taken < cfg.steps);
  for (std::size_t j = 0; j < res.final_state.size(); ++j) CHECK(std::isfinite(std::abs(res.final_state[j])));
}

TEST_CASE("loss of resolution stops the run") {
  const TorusGrid g(3.0, 256);
  auto cfg = make_config(fch_eq(0.9), g, 1.8, 2000);
  const auto res = evolve(gaussian(g, 1.0), cfg);
  CHECK(res.stop == StopReason::resolution_lost);
  CHECK(res.final_time < 1.8);
  CHECK(res.monitors.tail.back() > 1e-6);
}

TEST_CASE("Hopf break time") {
  const TorusGrid g(10.0, 1024);
  RealVector u(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) u[i] = std::pow(1.0 / std::cosh(g.nodes()[i]), 2);

  // dense oracle: max |d/dx sech^2 x| = 2 |sech^2 x tanh x| on a fine uniform mesh
  double slope = 0.0;
  for (int i = 0; i <= 2'000'000; ++i) {
    const double x = 2.0 * i / 2'000'000.0;
    const double s = 1.0 / std::cosh(x);
    slope = std::max(slope, 2.0 * s * s * std::tanh(x));
  }
  const double oracle = 1.0 / (3.0 * slope);

  const double tc = hopf_break_time(u, g);
  CHECK(tc == doctest::Approx(0.4330).epsilon(0.001 / 0.4330));
  CHECK(std::abs(tc - oracle) <= 1e-6);
  CHECK(hopf_break_time(u, g, 1.2) == tc);

  const RealVector flat(g.size(), 0.7);
  CHECK_THROWS_AS(hopf_break_time(flat, g), NoBreaking);
}

TEST_CASE("non-breaking margin") {
  const TorusGrid g(10.0, 256);
  const RealVector zero(g.size(), 0.0);
  CHECK(non_breaking_margin(zero, g, 1.5, 0.6) == doctest::Approx(0.6));
  const RealVector c(g.size(), 0.3);
  CHECK(non_breaking_margin(c, g, 1.5, 0.6) == doctest::Approx(0.9));
}

TEST_CASE("tail indicator") {
  const TorusGrid g(5.0, 128);
  CHECK(tail_indicator(forward(g, gaussian(g, 1.0))) < 1e-12);
  const auto noise = testing::random_field(g.size(), 3);
  CHECK(tail_indicator(forward(g, noise)) > 0.1);
}
