#pragma once

#include <cstddef>

#include <Eigen/Core>

#include "grcgan/eval/sampler.hpp"

namespace grcgan::eval {

struct LipschitzAudit {
  Eigen::RowVectorXd x1;
  Eigen::RowVectorXd x2;
  double distance = 0.0;      // ||x1 - x2||
  double k_hat = 0.0;         // max over shared z of ||G(x1,z) - G(x2,z)|| / distance
  double w2_fitted = 0.0;     // W2 between Gaussians fitted to both clouds
  double bound_slack = 0.0;   // k_hat * distance - w2_fitted
  double standard_error = 0.0;  // of w2_fitted
};

/// Draws n_z shared noise vectors, pushes both conditions through G and
/// compares the fitted W2 with the worst pointwise ratio. The standard error
/// is the spread of w2_fitted over `bootstrap` paired resamples, floored at
/// 1e-9 to absorb rounding when the two clouds are exact translates.
LipschitzAudit lipschitz_audit(const Sampler& g, const Eigen::RowVectorXd& x1, const Eigen::RowVectorXd& x2,
                               std::size_t n_z, Rng& rng, std::size_t bootstrap = 200);

}  // namespace grcgan::eval
