#include "grcgan/eval/gaussian.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "grcgan/error.hpp"

namespace grcgan::eval {

namespace {
constexpr double kTolerance = 1e-10;
}

GaussianSpec gaussian_fit(const RowMatrix& samples) {
  const Eigen::Index n = samples.rows();
  const Eigen::Index d = samples.cols();
  if (d == 0 || n < d + 1) throw ShapeError("gaussian_fit needs at least d + 1 samples");
  GaussianSpec g;
  g.mean = samples.colwise().mean().transpose();
  const RowMatrix centered = samples.rowwise() - g.mean.transpose();
  g.cov = (centered.transpose() * centered) / static_cast<double>(n - 1);
  g.cov = (0.5 * (g.cov + g.cov.transpose())).eval();
  return g;
}

Eigen::MatrixXd matrix_sqrt_psd(const Eigen::MatrixXd& m) {
  if (m.rows() != m.cols()) throw ShapeError("matrix_sqrt_psd needs a square matrix");
  if (m.size() == 0) return m;
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  if ((m - m.transpose()).cwiseAbs().maxCoeff() > kTolerance * scale) {
    throw ConfigError("matrix_sqrt_psd needs a symmetric matrix");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(0.5 * (m + m.transpose()));
  if (eig.info() != Eigen::Success) throw NonFiniteError("eigendecomposition failed");
  if (eig.eigenvalues().minCoeff() < -kTolerance * scale) throw ConfigError("matrix_sqrt_psd needs a PSD matrix");
  const Eigen::VectorXd roots = eig.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  Eigen::MatrixXd s = eig.eigenvectors() * roots.asDiagonal() * eig.eigenvectors().transpose();
  return 0.5 * (s + s.transpose());
}

double w2_gaussians(const GaussianSpec& a, const GaussianSpec& b) {
  if (a.dim() != b.dim() || a.cov.rows() != a.dim() || b.cov.rows() != b.dim()) {
    throw ShapeError("w2_gaussians: dimension mismatch");
  }
  // tr(A + B - 2 (B^1/2 A B^1/2)^1/2) equals min over orthogonal U of
  // ||A^1/2 - B^1/2 U||_F^2, attained at the polar factor of B^1/2 A^1/2.
  // The squared-difference form stays accurate when A and B nearly agree,
  // where the trace form loses everything to cancellation.
  const Eigen::MatrixXd root_a = matrix_sqrt_psd(a.cov);
  const Eigen::MatrixXd root_b = matrix_sqrt_psd(b.cov);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(root_b * root_a, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Eigen::MatrixXd polar = svd.matrixU() * svd.matrixV().transpose();
  const double trace_term = (root_a - root_b * polar).squaredNorm();
  return std::sqrt((a.mean - b.mean).squaredNorm() + trace_term);
}

}  // namespace grcgan::eval
