#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "fch/errors.hpp"
#include "fch/gmres.hpp"
#include "fch/lsq.hpp"

using namespace fch;

namespace {

Eigen::MatrixXd random_matrix(int n, unsigned seed, double diag) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> dist(0.0, 1.0);
  Eigen::MatrixXd a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a(i, j) = dist(rng) / std::sqrt(n);
  a.diagonal().array() += diag;
  return a;
}

LinearMap dense(const Eigen::MatrixXd& a) {
  return [&a](std::span<const double> x, std::span<double> y) {
    Eigen::Map<Eigen::VectorXd>(y.data(), y.size()) =
        a * Eigen::Map<const Eigen::VectorXd>(x.data(), x.size());
  };
}

}  // namespace

TEST_CASE("gmres solves a well-conditioned system") {
  const int n = 80;
  const auto a = random_matrix(n, 3, 4.0);
  Eigen::VectorXd b = Eigen::VectorXd::LinSpaced(n, -1.0, 2.0);
  GmresSettings s;
  s.rel_tol = 1e-12;
  const auto r = gmres(dense(a), {}, std::span<const double>(b.data(), n), s);
  CHECK(r.converged);
  const Eigen::VectorXd x = Eigen::Map<const Eigen::VectorXd>(r.x.data(), n);
  const Eigen::VectorXd exact = a.partialPivLu().solve(b);
  CHECK((x - exact).norm() <= 1e-10 * exact.norm());
  CHECK((b - a * x).norm() / b.norm() == doctest::Approx(r.rel_residual).epsilon(1e-3).scale(1e-12));
}

TEST_CASE("gmres restarts and respects the iteration cap") {
  const int n = 120;
  const auto a = random_matrix(n, 5, 1.5);
  Eigen::VectorXd b = Eigen::VectorXd::Ones(n);
  GmresSettings s;
  s.restart = 5;
  s.rel_tol = 1e-10;
  s.max_iterations = 2000;
  const auto r = gmres(dense(a), {}, std::span<const double>(b.data(), n), s);
  CHECK(r.converged);
  CHECK(r.iterations > 5);
  CHECK(r.rel_residual <= 1e-10);

  s.max_iterations = 3;
  const auto capped = gmres(dense(a), {}, std::span<const double>(b.data(), n), s);
  CHECK_FALSE(capped.converged);
  CHECK(capped.iterations <= 3);
}

TEST_CASE("right preconditioning with the exact inverse converges at once") {
  const int n = 50;
  const auto a = random_matrix(n, 9, 0.3);
  const Eigen::MatrixXd inv = a.inverse();
  Eigen::VectorXd b = Eigen::VectorXd::LinSpaced(n, 1.0, 3.0);
  GmresSettings s;
  s.rel_tol = 1e-10;
  const auto r = gmres(dense(a), dense(inv), std::span<const double>(b.data(), n), s);
  CHECK(r.converged);
  CHECK(r.iterations <= 2);
  const Eigen::VectorXd x = Eigen::Map<const Eigen::VectorXd>(r.x.data(), n);
  CHECK((a * x - b).norm() <= 1e-9 * b.norm());
}

TEST_CASE("gmres with a zero right-hand side returns zero") {
  const auto a = random_matrix(10, 1, 2.0);
  const std::vector<double> b(10, 0.0);
  const auto r = gmres(dense(a), {}, b);
  CHECK(r.converged);
  for (double v : r.x) CHECK(v == 0.0);
}

TEST_CASE("least squares recovers exact coefficients") {
  const std::size_t n = 40;
  std::vector<double> one(n, 1.0), t(n), lt(n), y(n);
  for (std::size_t i = 0; i < n; ++i) {
    t[i] = 1.0 + 0.5 * static_cast<double>(i);
    lt[i] = std::log(t[i]);
    y[i] = 2.0 - 1.5 * lt[i] - 0.1 * t[i];
  }
  const std::vector<std::vector<double>> cols{one, lt, t};
  const auto fit = least_squares(cols, y);
  REQUIRE(fit.beta.size() == 3);
  CHECK(fit.beta[0] == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(fit.beta[1] == doctest::Approx(-1.5).epsilon(1e-12));
  CHECK(fit.beta[2] == doctest::Approx(-0.1).epsilon(1e-12));
  CHECK(fit.rss <= 1e-24);
  CHECK(fit.samples == n);
}

TEST_CASE("least squares standard errors and AIC") {
  const std::size_t n = 200;
  std::mt19937_64 rng(11);
  std::normal_distribution<double> noise(0.0, 0.01);
  std::vector<double> one(n, 1.0), t(n), y(n);
  for (std::size_t i = 0; i < n; ++i) {
    t[i] = static_cast<double>(i) / n;
    y[i] = 0.5 + 3.0 * t[i] + noise(rng);
  }
  const std::vector<std::vector<double>> cols{one, t};
  const auto fit = least_squares(cols, y);
  CHECK(std::abs(fit.beta[1] - 3.0) <= 5 * fit.stderr_beta[1]);
  CHECK(fit.stderr_beta[1] > 0.0);
  CHECK(fit.stderr_beta[1] < 0.01);
  const double expected_aic = n * std::log(fit.rss / n) + 2 * 2;
  CHECK(fit.aic() == doctest::Approx(expected_aic));

  const std::vector<std::vector<double>> just_const{one};
  CHECK(least_squares(just_const, y).aic() > fit.aic());
}

TEST_CASE("least squares input validation") {
  const std::vector<std::vector<double>> too_few{{1.0, 1.0}, {1.0, 2.0}};
  const std::vector<double> y{1.0, 2.0};
  CHECK_THROWS_AS(least_squares(too_few, y), InvalidArgument);
  const std::vector<std::vector<double>> ragged{{1.0, 1.0, 1.0}, {1.0, 2.0}};
  const std::vector<double> y3{1.0, 2.0, 3.0};
  CHECK_THROWS_AS(least_squares(ragged, y3), InvalidArgument);
}
