#pragma once

#include <cstddef>

#include <Eigen/Core>

#include "grcgan/random.hpp"

namespace grcgan::data {

struct GaussianSpec {
  Eigen::VectorXd mean;
  Eigen::MatrixXd cov;

  Eigen::Index dim() const { return mean.size(); }
  /// Throws ShapeError / ConfigError unless cov is square, matches mean,
  /// symmetric and PSD within 1e-10.
  void validate() const;
};

/// Matrix L with L L^T = cov (Cholesky, or eigen factor with clamped
/// eigenvalues when cov is only semi-definite).
Eigen::MatrixXd covariance_factor(const Eigen::MatrixXd& cov);

/// n rows drawn from the Gaussian.
RowMatrix sample_gaussian(const GaussianSpec& g, std::size_t n, Rng& rng);

}  // namespace grcgan::data
