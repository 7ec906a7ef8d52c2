#include "fch/gmres.hpp"

#include <cmath>

#include "fch/errors.hpp"

namespace fch {

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm(std::span<const double> a) { return std::sqrt(dot(a, a)); }

}  // namespace

GmresResult gmres(const LinearMap& op, const LinearMap& preconditioner, std::span<const double> rhs,
                  const GmresSettings& settings) {
  const std::size_t n = rhs.size();
  const int m = settings.restart;
  GmresResult result;
  result.x.assign(n, 0.0);

  const double bnorm = norm(rhs);
  if (bnorm == 0.0) {
    result.rel_residual = 0.0;
    result.converged = true;
    return result;
  }

  auto precondition = [&](std::span<const double> in, std::span<double> out) {
    if (preconditioner) {
      preconditioner(in, out);
    } else {
      std::copy(in.begin(), in.end(), out.begin());
    }
  };

  std::vector<std::vector<double>> basis(m + 1, std::vector<double>(n));
  std::vector<std::vector<double>> hess(m + 1, std::vector<double>(m, 0.0));
  std::vector<double> cs(m), sn(m), g(m + 1), y(m);
  std::vector<double> r(rhs.begin(), rhs.end());
  std::vector<double> w(n), z(n);

  double rnorm = bnorm;
  while (result.iterations < settings.max_iterations) {
    for (std::size_t i = 0; i < n; ++i) basis[0][i] = r[i] / rnorm;
    std::fill(g.begin(), g.end(), 0.0);
    g[0] = rnorm;

    int cols = 0;
    for (int j = 0; j < m && result.iterations < settings.max_iterations; ++j) {
      precondition(basis[j], z);
      op(z, w);
      ++result.iterations;
      // modified Gram-Schmidt
      for (int i = 0; i <= j; ++i) {
        const double hij = dot(w, basis[i]);
        hess[i][j] = hij;
        for (std::size_t q = 0; q < n; ++q) w[q] -= hij * basis[i][q];
      }
      const double hnext = norm(w);
      hess[j + 1][j] = hnext;
      if (!std::isfinite(hnext)) throw NoConvergence("GMRES: non-finite Krylov vector");

      for (int i = 0; i < j; ++i) {
        const double t = cs[i] * hess[i][j] + sn[i] * hess[i + 1][j];
        hess[i + 1][j] = -sn[i] * hess[i][j] + cs[i] * hess[i + 1][j];
        hess[i][j] = t;
      }
      const double denom = std::hypot(hess[j][j], hess[j + 1][j]);
      cs[j] = denom == 0.0 ? 1.0 : hess[j][j] / denom;
      sn[j] = denom == 0.0 ? 0.0 : hess[j + 1][j] / denom;
      hess[j][j] = cs[j] * hess[j][j] + sn[j] * hess[j + 1][j];
      hess[j + 1][j] = 0.0;
      g[j + 1] = -sn[j] * g[j];
      g[j] = cs[j] * g[j];
      cols = j + 1;

      const bool happy = hnext <= 1e-14 * bnorm;
      if (std::abs(g[j + 1]) <= settings.rel_tol * bnorm || happy) break;
      for (std::size_t q = 0; q < n; ++q) basis[j + 1][q] = w[q] / hnext;
    }

    // back substitution
    for (int i = cols - 1; i >= 0; --i) {
      double s = g[i];
      for (int k = i + 1; k < cols; ++k) s -= hess[i][k] * y[k];
      if (hess[i][i] == 0.0) throw NoConvergence("GMRES: singular Hessenberg matrix");
      y[i] = s / hess[i][i];
    }
    std::fill(w.begin(), w.end(), 0.0);
    for (int i = 0; i < cols; ++i)
      for (std::size_t q = 0; q < n; ++q) w[q] += y[i] * basis[i][q];
    precondition(w, z);
    for (std::size_t q = 0; q < n; ++q) result.x[q] += z[q];

    // true residual for the restart
    op(result.x, w);
    for (std::size_t q = 0; q < n; ++q) r[q] = rhs[q] - w[q];
    rnorm = norm(r);
    result.rel_residual = rnorm / bnorm;
    if (!std::isfinite(rnorm)) throw NoConvergence("GMRES: non-finite residual");
    if (result.rel_residual <= settings.rel_tol) {
      result.converged = true;
      break;
    }
  }
  return result;
}

}  // namespace fch
