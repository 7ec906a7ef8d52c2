#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "fch/ch_soliton.hpp"
#include "fch/errors.hpp"
#include "fch/solitary.hpp"
#include "support.hpp"

using namespace fch;
using fch::testing::max_abs;
using fch::testing::max_abs_diff;

namespace {

const TorusGrid& grid13() {
  static const TorusGrid g(100.0, 1u << 13);
  return g;
}

SolitaryWaveProblem problem(double alpha, const TorusGrid& g = grid13()) { return {alpha, 2.0, 1.2, 1.0 / 3.0, g}; }

RealVector ch_seed(const TorusGrid& g = grid13()) { return sample_on_grid(ChSolitonParams(2.0, 0.6), g); }

double max_abs(const SpectralField& f) {
  double m = 0.0;
  for (std::size_t j = 0; j < f.size(); ++j) m = std::max(m, std::abs(f[j]));
  return m;
}

}  // namespace

TEST_CASE("problem validation") {
  CHECK_THROWS_AS(problem(0.0).validate(), InvalidArgument);
  CHECK_THROWS_AS(problem(2.5).validate(), InvalidArgument);
  SolitaryWaveProblem p = problem(1.5);
  p.speed = 0.0;
  CHECK_THROWS_AS(p.validate(), InvalidArgument);
  CHECK_NOTHROW(problem(2.0).validate());
}

TEST_CASE("residual") {
  const auto& g = grid13();
  const SpectralField zero(g);
  CHECK(max_abs(residual(zero, problem(1.5))) == 0.0);

  RealVector gauss(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) gauss[i] = std::exp(-g.nodes()[i] * g.nodes()[i]);
  CHECK(residual_max_norm(gauss, problem(1.5)) > 1e-2);

  CHECK(residual_max_norm(ch_seed(), problem(2.0)) <= 1e-8);
}

TEST_CASE("Jacobian action") {
  const auto& g = grid13();
  const auto prob = problem(1.5);
  RealVector q = ch_seed();
  const RealVector pert = testing::smooth_random_field(g, 21, 8);
  for (std::size_t i = 0; i < q.size(); ++i) q[i] += 0.05 * pert[i] * std::exp(-0.01 * g.nodes()[i] * g.nodes()[i]);
  const SpectralField qh = forward(g, q);
  RealVector v = testing::smooth_random_field(g, 22, 10);
  for (std::size_t i = 0; i < v.size(); ++i) v[i] *= std::exp(-0.02 * g.nodes()[i] * g.nodes()[i]);
  const SpectralField vh = forward(g, v);

  SUBCASE("zero direction") { CHECK(max_abs(jacobian_action(qh, SpectralField(g), prob)) == 0.0); }

  SUBCASE("linearity") {
    const auto a = jacobian_action(qh, vh, prob);
    const auto b = jacobian_action(qh, 3.5 * vh, prob);
    CHECK(max_abs_diff((3.5 * a).coeffs(), b.coeffs()) <= 1e-12 * max_abs(b));
  }

  SUBCASE("matches central finite differences") {
    const double eps = 1e-7 * std::max(1.0, max_abs(std::span<const double>(q)));
    const auto jv = jacobian_action(qh, vh, prob);
    const auto rp = residual(qh + eps * vh, prob);
    const auto rm = residual(qh - eps * vh, prob);
    const auto fd = (1.0 / (2.0 * eps)) * (rp - rm);
    CHECK(max_abs_diff(jv.coeffs(), fd.coeffs()) <= 1e-6 * max_abs(jv));
  }

  SUBCASE("frozen linearization agrees with the free function") {
    const Linearization lin(qh, prob);
    const auto a = lin.apply(vh);
    const auto b = jacobian_action(qh, vh, prob);
    CHECK(max_abs_diff(a.coeffs(), b.coeffs()) <= 1e-12 * max_abs(b));
  }
}

TEST_CASE("fractional order 2 reproduces the CH soliton") {
  const auto& g = grid13();
  NewtonSettings s;
  s.check_jacobian = true;
  const auto sol = newton_krylov_solve(problem(2.0), ch_seed(), s);
  CHECK(sol.newton_steps <= 3);
  CHECK(sol.residual_norm <= 1e-10);
  CHECK(max_abs_diff(sol.profile, ch_seed(g)) <= 1e-8);
  CHECK(sol.decay.kind == DecayClass::exponential);
  CHECK(sol.jacobian_check <= 1e-6);
}

TEST_CASE("alpha = 1.5 from the CH seed") {
  const auto& g = grid13();
  NewtonSettings s;
  s.check_jacobian = true;
  const auto sol = newton_krylov_solve(problem(1.5), ch_seed(), s);
  CHECK(sol.residual_norm <= 1e-10);
  CHECK(sol.amplitude() > 0.8);
  CHECK(sol.decay.kind == DecayClass::exponential);
  CHECK(sol.jacobian_check <= 1e-6);
  CHECK(sol.coeffs.hermitian_defect() <= 1e-12);

  // even about the centre
  double asym = 0.0;
  for (std::size_t i = 1; i < g.size(); ++i) asym = std::max(asym, std::abs(sol.profile[i] - sol.profile[g.mirror(i)]));
  CHECK(asym <= 1e-8);
  CHECK(sol.profile[g.center_index()] == max_abs(std::span<const double>(sol.profile)));

  // slower decay than the CH wave: more mass far out
  const RealVector ch = ch_seed();
  const std::size_t far = g.center_index() + static_cast<std::size_t>(10.0 / g.spacing());
  CHECK(sol.profile[far] > ch[far]);

  SUBCASE("unintegrated equation holds to 10 tol") {
    CHECK(unintegrated_residual_max_norm(sol.profile, sol.problem) <= 10 * 1e-10);
  }

  SUBCASE("translation invariance of the residual") {
    for (std::size_t m : {1u, 17u, 1000u}) {
      RealVector shifted(sol.profile.size());
      std::rotate_copy(sol.profile.begin(), sol.profile.begin() + static_cast<std::ptrdiff_t>(m), sol.profile.end(),
                       shifted.begin());
      CHECK(std::abs(residual_max_norm(shifted, sol.problem) - sol.residual_norm) <= 1e-12);
    }
  }
}

TEST_CASE("very small fractional order has no smooth wave") {
  bool failed = false;
  try {
    newton_krylov_solve(problem(0.3), ch_seed());
  } catch (const NoConvergence&) {
    failed = true;
  } catch (const NonSmoothLimit&) {
    failed = true;
  }
  CHECK(failed);
}

TEST_CASE("continuation families") {
  const auto& g = grid13();

  SUBCASE("alpha from 2 to 1.5 in steps of 0.1") {
    ContinuationPlan plan{g, 1.0 / 3.0, {}};
    for (double a = 1.9; a > 1.45; a -= 0.1) plan.schedule.push_back({a, 2.0, 0.6});
    const auto sols = trace_continuation(plan);
    REQUIRE(sols.size() == plan.schedule.size());
    for (const auto& s : sols) CHECK(s.residual_norm <= 1e-10);
    for (std::size_t i = 1; i < sols.size(); ++i) CHECK(sols[i].amplitude() > sols[i - 1].amplitude());
  }

  SUBCASE("amplitude grows with the speed") {
    ContinuationPlan plan{g, 1.0 / 3.0, {}};
    for (double c : {2.0, 3.0, 4.0, 5.0}) plan.schedule.push_back({1.5, c, 0.6});
    const auto sols = trace_continuation(plan);
    REQUIRE(sols.size() == 4);
    for (std::size_t i = 1; i < sols.size(); ++i) CHECK(sols[i].amplitude() > sols[i - 1].amplitude());
  }

  SUBCASE("fast waves at alpha = 1.5 lose smoothness before c = 6") {
    ContinuationPlan plan{g, 1.0 / 3.0, {}};
    plan.schedule.push_back({1.5, 6.0, 0.6});
    try {
      trace_continuation(plan);
      FAIL("expected a continuation failure");
    } catch (const ContinuationFailure& f) {
      CHECK(f.frontier().speed > 5.0);
      CHECK(f.frontier().speed <= 6.0);
      REQUIRE(f.last_good().has_value());
      CHECK(f.last_good()->amplitude() > 4.0);
    }
  }

  SUBCASE("omega family converges") {
    ContinuationPlan plan{g, 1.0 / 3.0, {}};
    for (double w : {0.4, 0.6, 0.8}) plan.schedule.push_back({1.5, 2.0, w});
    const auto sols = trace_continuation(plan);
    REQUIRE(sols.size() == 3);
    for (const auto& s : sols) {
      CHECK(s.residual_norm <= 1e-10);
      CHECK(s.amplitude() > 0.0);
    }
  }

  SUBCASE("failure reports a frontier and the last good wave") {
    ContinuationPlan plan{g, 1.0 / 3.0, {}};
    plan.schedule.push_back({1.5, 2.0, 0.6});
    plan.schedule.push_back({0.3, 2.0, 0.6});
    plan.max_bisections = 2;
    try {
      trace_continuation(plan);
      FAIL("expected a continuation failure");
    } catch (const ContinuationFailure& f) {
      REQUIRE(f.last_good().has_value());
      CHECK(f.last_good()->problem.alpha < 1.5 + 1e-12);
      CHECK(f.frontier().alpha < f.last_good()->problem.alpha);
      CHECK(f.frontier().alpha >= 0.3);
    }
  }
}

TEST_CASE("decay classifier") {
  const TorusGrid g(10.0, 1024);
  RealVector smooth(g.size()), kink(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double x = g.nodes()[i];
    smooth[i] = 1.0 / std::cosh(x) / std::cosh(x);
    kink[i] = std::exp(-std::abs(x));
  }
  CHECK(classify_decay(forward(g, smooth)).kind == DecayClass::exponential);
  const auto k = classify_decay(forward(g, kink));
  CHECK(k.kind == DecayClass::algebraic);
  CHECK(k.rate > 1.0);
}

TEST_CASE("centering puts the maximum on the x = 0 node") {
  const TorusGrid g(5.0, 64);
  RealVector q(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) q[i] = std::exp(-(g.nodes()[i] - 1.3) * (g.nodes()[i] - 1.3));
  center_and_symmetrize(q);
  const auto peak = std::max_element(q.begin(), q.end()) - q.begin();
  CHECK(static_cast<std::size_t>(peak) == g.center_index());
  for (std::size_t i = 1; i < g.size(); ++i) CHECK(q[i] == doctest::Approx(q[g.mirror(i)]));
}
