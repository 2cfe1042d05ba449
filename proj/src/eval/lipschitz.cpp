#include "grcgan/eval/lipschitz.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "grcgan/error.hpp"
#include "grcgan/eval/gaussian.hpp"
#include "grcgan/gan/networks.hpp"

namespace grcgan::eval {

namespace {
constexpr double kStandardErrorFloor = 1e-9;
}

RowMatrix Sampler::draw(const Eigen::RowVectorXd& condition, std::size_t count, Rng& rng) const {
  const auto n = static_cast<Eigen::Index>(count);
  const RowMatrix noise = standard_normal(n, static_cast<Eigen::Index>(noise_dim), rng);
  const RowMatrix conditions = condition.replicate(n, 1);
  return map(conditions, noise);
}

Sampler network_sampler(const nn::Network& generator, gan::ConditionEncoding encoding, std::size_t noise_dim) {
  return Sampler{noise_dim, [&generator, encoding](const RowMatrix& conditions, const RowMatrix& noise) {
                   return RowMatrix(gan::predict_samples(generator, encoding, conditions, noise));
                 }};
}

LipschitzAudit lipschitz_audit(const Sampler& g, const Eigen::RowVectorXd& x1, const Eigen::RowVectorXd& x2,
                               std::size_t n_z, Rng& rng, std::size_t bootstrap) {
  if (x1.size() != x2.size()) throw ShapeError("audit conditions differ in dimension");
  LipschitzAudit audit;
  audit.x1 = x1;
  audit.x2 = x2;
  audit.distance = (x1 - x2).norm();
  if (!(audit.distance > 0.0)) throw ConfigError("audit needs two distinct conditions");
  if (n_z < 50) throw ConfigError("audit needs at least 50 noise draws");
  const auto n = static_cast<Eigen::Index>(n_z);
  const RowMatrix noise = standard_normal(n, static_cast<Eigen::Index>(g.noise_dim), rng);
  const RowMatrix a = g(x1.replicate(n, 1), noise);
  const RowMatrix b = g(x2.replicate(n, 1), noise);
  audit.k_hat = (a - b).rowwise().norm().maxCoeff() / audit.distance;
  audit.w2_fitted = w2_gaussians(gaussian_fit(a), gaussian_fit(b));
  audit.bound_slack = audit.k_hat * audit.distance - audit.w2_fitted;

  double sum = 0.0;
  double sum_sq = 0.0;
  std::uniform_int_distribution<Eigen::Index> pick(0, n - 1);
  RowMatrix ra(n, a.cols());
  RowMatrix rb(n, b.cols());
  for (std::size_t rep = 0; rep < bootstrap; ++rep) {
    for (Eigen::Index i = 0; i < n; ++i) {
      const Eigen::Index j = pick(rng);
      ra.row(i) = a.row(j);
      rb.row(i) = b.row(j);
    }
    const double w = w2_gaussians(gaussian_fit(ra), gaussian_fit(rb));
    sum += w;
    sum_sq += w * w;
  }
  double sd = 0.0;
  if (bootstrap > 1) {
    const double m = sum / static_cast<double>(bootstrap);
    sd = std::sqrt(std::max(0.0, (sum_sq - static_cast<double>(bootstrap) * m * m) / static_cast<double>(bootstrap - 1)));
  }
  audit.standard_error = std::max(sd, kStandardErrorFloor);
  return audit;
}

}  // namespace grcgan::eval
