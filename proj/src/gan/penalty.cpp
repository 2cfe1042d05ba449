#include "grcgan/gan/penalty.hpp"

#include <cmath>
#include <stdexcept>

#include "grcgan/error.hpp"
#include "grcgan/nn/ops.hpp"

namespace grcgan::gan {

namespace {

constexpr double kPerturbationFloor = 1e-12;

void require_batch(const Matrix& conditions, const Matrix& noise) {
  if (conditions.rows() != noise.rows()) throw ShapeError("conditions and noise row counts differ");
  if (conditions.rows() == 0) throw ShapeError("empty regularization batch");
}

}  // namespace

nn::Tensor gr_penalty_exact(const GeneratorFn& generator, const Matrix& conditions, const Matrix& noise,
                            double h) {
  require_batch(conditions, noise);
  if (!(h > 0.0)) throw std::invalid_argument("finite-difference step must be > 0");
  const Eigen::Index m = conditions.rows();
  const Eigen::Index p = conditions.cols();

  Matrix shifted(2 * p * m, p);
  Matrix repeated_noise(2 * p * m, noise.cols());
  for (Eigen::Index j = 0; j < p; ++j) {
    auto plus = shifted.middleRows(2 * j * m, m);
    auto minus = shifted.middleRows((2 * j + 1) * m, m);
    plus = conditions;
    minus = conditions;
    plus.col(j).array() += h;
    minus.col(j).array() -= h;
    repeated_noise.middleRows(2 * j * m, m) = noise;
    repeated_noise.middleRows((2 * j + 1) * m, m) = noise;
  }
  const nn::Tensor out = generator(shifted, repeated_noise);

  std::vector<nn::Tensor> columns;
  columns.reserve(static_cast<std::size_t>(p));
  for (Eigen::Index j = 0; j < p; ++j) {
    auto diff = nn::sub(nn::slice_rows(out, 2 * j * m, m), nn::slice_rows(out, (2 * j + 1) * m, m));
    columns.push_back(nn::scale(diff, 1.0 / (2.0 * h)));
  }
  const nn::Tensor jacobian = columns.size() == 1 ? columns.front() : nn::concat_cols(columns);
  return nn::mean(nn::row_norm(jacobian));
}

nn::Tensor gr_penalty_ratio(const GeneratorFn& generator, const Matrix& conditions, const Matrix& noise,
                            const Matrix& perturbations, double tau1) {
  require_batch(conditions, noise);
  if (perturbations.rows() != conditions.rows() || perturbations.cols() != conditions.cols()) {
    throw ShapeError("perturbations must match the condition batch");
  }
  const Eigen::Index m = conditions.rows();
  const Eigen::VectorXd lengths = perturbations.rowwise().norm();
  for (Eigen::Index j = 0; j < m; ++j) {
    if (!std::isfinite(lengths(j)) || lengths(j) < kPerturbationFloor) {
      throw std::invalid_argument("perturbation norm below numeric floor; tau2 was not enforced");
    }
  }

  Matrix stacked(2 * m, conditions.cols());
  stacked << conditions + perturbations, conditions;
  Matrix stacked_noise(2 * m, noise.cols());
  stacked_noise << noise, noise;
  const nn::Tensor out = generator(stacked, stacked_noise);

  const nn::Tensor moved = nn::row_norm(nn::sub(nn::slice_rows(out, 0, m), nn::slice_rows(out, m, m)));
  const nn::Tensor ratio = nn::mul(moved, nn::Tensor::constant(lengths.cwiseInverse()));
  return nn::mean(std::isinf(tau1) ? ratio : nn::clamp_max(ratio, tau1));
}

}  // namespace grcgan::gan
