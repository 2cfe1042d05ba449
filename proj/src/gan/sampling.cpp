#include "grcgan/gan/sampling.hpp"

#include <numeric>
#include <stdexcept>

#include "grcgan/error.hpp"

namespace grcgan::gan {

Matrix interpolate_conditions(const Matrix& x, const Matrix& x_prime, const Eigen::VectorXd& eps) {
  if (x.rows() != x_prime.rows() || x.cols() != x_prime.cols()) {
    throw ShapeError("interpolation endpoints have different shapes");
  }
  if (eps.size() != x.rows()) throw ShapeError("need one interpolation weight per row");
  Matrix out(x.rows(), x.cols());
  for (Eigen::Index j = 0; j < x.rows(); ++j) {
    out.row(j) = eps(j) * x.row(j) + (1.0 - eps(j)) * x_prime.row(j);
  }
  return out;
}

Matrix sample_interpolated_conditions(const Matrix& x, const Matrix& x_prime, Rng& rng) {
  if (x.rows() != x_prime.rows() || x.cols() != x_prime.cols()) {
    throw ShapeError("interpolation endpoints have different shapes");
  }
  Eigen::VectorXd eps(x.rows());
  for (Eigen::Index j = 0; j < eps.size(); ++j) eps(j) = uniform01(rng);
  return interpolate_conditions(x, x_prime, eps);
}

Eigen::VectorXd sample_perturbation(std::size_t dim, const PerturbationLaw& law, double tau2, Rng& rng) {
  if (dim == 0) throw ConfigError("perturbation dimension must be >= 1");
  const auto n = static_cast<Eigen::Index>(dim);
  if (law.kind == PerturbationLaw::Kind::sphere_surface) {
    if (law.scale < tau2) throw ConfigError("sphere radius below tau2");
    for (;;) {
      Eigen::VectorXd v = standard_normal(n, 1, rng).col(0);
      const double norm = v.norm();
      if (norm > 0.0) return v * (law.scale / norm);
    }
  }
  for (int attempt = 0; attempt < 100; ++attempt) {
    Eigen::VectorXd v = standard_normal(n, 1, rng).col(0) * law.scale;
    if (v.norm() >= tau2) return v;
  }
  throw std::runtime_error("Gaussian perturbation stayed below tau2 for 100 draws");
}

Matrix sample_perturbations(Eigen::Index rows, std::size_t dim, const PerturbationLaw& law, double tau2,
                            Rng& rng) {
  Matrix out(rows, static_cast<Eigen::Index>(dim));
  for (Eigen::Index i = 0; i < rows; ++i) out.row(i) = sample_perturbation(dim, law, tau2, rng).transpose();
  return out;
}

std::vector<Eigen::Index> sample_batch_indices(Eigen::Index population, Eigen::Index batch, Rng& rng) {
  if (population <= 0) throw ConfigError("cannot sample from an empty dataset");
  std::vector<Eigen::Index> out(static_cast<std::size_t>(batch));
  if (batch <= population) {
    std::vector<Eigen::Index> perm(static_cast<std::size_t>(population));
    std::iota(perm.begin(), perm.end(), Eigen::Index{0});
    for (Eigen::Index i = 0; i < batch; ++i) {
      std::uniform_int_distribution<Eigen::Index> pick(i, population - 1);
      std::swap(perm[static_cast<std::size_t>(i)], perm[static_cast<std::size_t>(pick(rng))]);
      out[static_cast<std::size_t>(i)] = perm[static_cast<std::size_t>(i)];
    }
  } else {
    std::uniform_int_distribution<Eigen::Index> pick(0, population - 1);
    for (auto& idx : out) idx = pick(rng);
  }
  return out;
}

Matrix gather_rows(const Matrix& source, const std::vector<Eigen::Index>& rows) {
  Matrix out(static_cast<Eigen::Index>(rows.size()), source.cols());
  for (std::size_t i = 0; i < rows.size(); ++i) out.row(static_cast<Eigen::Index>(i)) = source.row(rows[i]);
  return out;
}

}  // namespace grcgan::gan
