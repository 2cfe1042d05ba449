#pragma once

#include <Eigen/Core>

#include "grcgan/data/gaussian.hpp"

namespace grcgan::eval {

using data::GaussianSpec;

/// Sample mean and unbiased (n - 1) covariance of the rows. Needs n >= d + 1.
GaussianSpec gaussian_fit(const RowMatrix& samples);

/// Symmetric PSD square root via eigendecomposition. Eigenvalues down to
/// -1e-10 are clamped to zero; lower ones, or asymmetry above 1e-10, throw.
Eigen::MatrixXd matrix_sqrt_psd(const Eigen::MatrixXd& m);

/// Closed-form 2-Wasserstein distance between two Gaussians.
double w2_gaussians(const GaussianSpec& a, const GaussianSpec& b);

}  // namespace grcgan::eval
