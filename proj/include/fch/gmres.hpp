#pragma once

// Restarted GMRES(m) with right preconditioning for real linear systems
// given only through matrix-vector products.

#include <functional>
#include <span>
#include <vector>

namespace fch {

/// y = A x.  Output storage is provided by the caller.
using LinearMap = std::function<void(std::span<const double> x, std::span<double> y)>;

struct GmresSettings {
  int restart = 30;
  double rel_tol = 1e-3;
  int max_iterations = 200;
};

struct GmresResult {
  std::vector<double> x;
  int iterations = 0;
  /// ||b - A x|| / ||b|| at return.
  double rel_residual = 1.0;
  bool converged = false;
};

/// Solves A x = b starting from x = 0. `preconditioner` applies M^{-1}; pass an
/// empty function for none. The residual is measured unpreconditioned.
GmresResult gmres(const LinearMap& op, const LinearMap& preconditioner, std::span<const double> rhs,
                  const GmresSettings& settings = {});

}  // namespace fch
