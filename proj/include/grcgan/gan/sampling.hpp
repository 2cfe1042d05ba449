#pragma once

#include <cstddef>
#include <vector>

#include "grcgan/gan/config.hpp"
#include "grcgan/random.hpp"

namespace grcgan::gan {

using Matrix = RowMatrix;

/// Row j of the result is eps_j * x_j + (1 - eps_j) * x'_j, one eps per row.
Matrix interpolate_conditions(const Matrix& x, const Matrix& x_prime, const Eigen::VectorXd& eps);
/// Same, with eps_j ~ U[0, 1] drawn from `rng` in row order.
Matrix sample_interpolated_conditions(const Matrix& x, const Matrix& x_prime, Rng& rng);

/// One perturbation with norm >= tau2. SphereSurface returns a uniformly
/// oriented vector of norm exactly `scale`; GaussianIso redraws short vectors
/// and gives up with std::runtime_error after 100 rejections.
Eigen::VectorXd sample_perturbation(std::size_t dim, const PerturbationLaw& law, double tau2, Rng& rng);
Matrix sample_perturbations(Eigen::Index rows, std::size_t dim, const PerturbationLaw& law, double tau2,
                            Rng& rng);

/// Distinct indices when batch <= population (partial Fisher-Yates),
/// otherwise draws with replacement.
std::vector<Eigen::Index> sample_batch_indices(Eigen::Index population, Eigen::Index batch, Rng& rng);
Matrix gather_rows(const Matrix& source, const std::vector<Eigen::Index>& rows);

}  // namespace grcgan::gan
