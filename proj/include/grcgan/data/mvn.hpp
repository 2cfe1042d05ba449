#pragma once

#include <cstddef>
#include <cstdint>

#include <json.hpp>

#include "grcgan/data/dataset.hpp"
#include "grcgan/data/gaussian.hpp"

namespace grcgan::data {

/// X ~ N(mu, Sigma) in R^k; the first p coordinates are the condition x and
/// the remaining k - p the output y.
struct MvnSpec {
  std::size_t k = 10;
  std::size_t p = 8;
  Eigen::VectorXd mu;
  Eigen::MatrixXd sigma;

  std::size_t output_dim() const { return k - p; }
  void validate() const;
};

void to_json(nlohmann::json& j, const MvnSpec& spec);
void from_json(const nlohmann::json& j, MvnSpec& spec);

/// mu_i ~ U[10, 15]; Sigma = c * A A^T with A (k x 2k) entries ~ U[-1, 1]
/// and c chosen so that max |Sigma_ij| = 0.25, then symmetrized. Eigenvalues
/// in [-1e-12, 0) are clamped to 0; anything lower is an error.
MvnSpec make_mvn_params(std::size_t k, std::size_t p, std::uint64_t seed);

/// N draws via Cholesky, falling back to a clamped eigen factor for
/// semi-definite Sigma.
LabeledDataset sample_mvn(const MvnSpec& spec, std::size_t n, Rng& rng);

/// Law of y given x: mean mu_y + S_yx S_xx^-1 (x - mu_x),
/// cov S_yy - S_yx S_xx^-1 S_xy. S_xx gets +1e-10 I when it is not
/// numerically positive definite; still singular is an error.
GaussianSpec true_conditional(const MvnSpec& spec, const Eigen::VectorXd& x);

/// Per-coordinate standard deviations of the condition block.
Eigen::VectorXd condition_stddev(const MvnSpec& spec);

/// The grid mu_x + c sigma_x for c in {-0.5, -0.25, 0, 0.25, 0.5}, one row each.
RowMatrix panel_conditions(const MvnSpec& spec);

}  // namespace grcgan::data
