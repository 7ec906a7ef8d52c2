#include "fch/lsq.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <limits>

#include "fch/errors.hpp"

namespace fch {

double LinearFit::aic() const {
  const double n = static_cast<double>(samples);
  const double floor_rss = std::max(rss, std::numeric_limits<double>::min());
  return n * std::log(floor_rss / n) + 2.0 * static_cast<double>(beta.size());
}

LinearFit least_squares(std::span<const std::vector<double>> columns, std::span<const double> y) {
  const auto p = static_cast<Eigen::Index>(columns.size());
  const auto n = static_cast<Eigen::Index>(y.size());
  if (p == 0 || n <= p) throw InvalidArgument("least squares: need more samples than parameters");
  Eigen::MatrixXd design(n, p);
  for (Eigen::Index c = 0; c < p; ++c) {
    if (static_cast<Eigen::Index>(columns[c].size()) != n)
      throw InvalidArgument("least squares: column length mismatch");
    for (Eigen::Index r = 0; r < n; ++r) design(r, c) = columns[c][r];
  }
  const Eigen::Map<const Eigen::VectorXd> rhs(y.data(), n);

  const Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design);
  const Eigen::VectorXd beta = qr.solve(rhs);
  const Eigen::VectorXd resid = rhs - design * beta;

  LinearFit fit;
  fit.samples = static_cast<std::size_t>(n);
  fit.beta.assign(beta.data(), beta.data() + p);
  fit.rss = resid.squaredNorm();
  const double sigma2 = fit.rss / static_cast<double>(n - p);
  const Eigen::MatrixXd cov = sigma2 * (design.transpose() * design).inverse();
  fit.stderr_beta.resize(static_cast<std::size_t>(p));
  for (Eigen::Index c = 0; c < p; ++c) fit.stderr_beta[c] = std::sqrt(std::max(cov(c, c), 0.0));
  return fit;
}

}  // namespace fch
