#pragma once

#include <span>
#include <vector>

namespace fch {

/// Ordinary least squares y ~ X beta for a small number of columns.
struct LinearFit {
  std::vector<double> beta;
  /// Sum of squared residuals.
  double rss = 0.0;
  /// Standard errors from sigma^2 (X^T X)^{-1}, sigma^2 = rss/(n - p).
  std::vector<double> stderr_beta;
  std::size_t samples = 0;

  /// Akaike information criterion n ln(rss/n) + 2p.
  double aic() const;
};

/// `columns` holds p design columns of equal length n > p.
LinearFit least_squares(std::span<const std::vector<double>> columns, std::span<const double> y);

}  // namespace fch
