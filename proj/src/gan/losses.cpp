#include "grcgan/gan/losses.hpp"

#include "grcgan/error.hpp"
#include "grcgan/gan/penalty.hpp"
#include "grcgan/nn/ops.hpp"

namespace grcgan::gan {

namespace {

nn::Tensor one_minus(const nn::Tensor& t) { return nn::add_scalar(nn::scale(t, -1.0), 1.0); }

nn::Tensor log_prob(const nn::Tensor& t) {
  return nn::log_clamped(t, kProbabilityFloor, 1.0 - kProbabilityFloor);
}

void require_finite(const nn::Tensor& t, const char* what) {
  if (!nn::all_finite(t.value())) throw NonFiniteError(std::string(what) + " is not finite");
}

}  // namespace

DiscriminatorLoss discriminator_loss(const DiscriminatorFn& discriminator, const Matrix& conditions,
                                     const Matrix& real, const Matrix& fake, const LossConfig& config,
                                     Rng& rng) {
  if (real.rows() != conditions.rows() || fake.rows() != conditions.rows() || real.cols() != fake.cols()) {
    throw ShapeError("discriminator batches are not aligned");
  }
  const nn::Tensor d_real = discriminator(conditions, nn::Tensor::constant(real));
  const nn::Tensor d_fake = discriminator(conditions, nn::Tensor::constant(fake));
  DiscriminatorLoss out;

  if (config.kind == LossKind::vanilla_bce) {
    out.loss = nn::scale(nn::add(nn::mean(log_prob(d_real)), nn::mean(log_prob(one_minus(d_fake)))), -1.0);
    out.adversarial = out.loss.item();
    require_finite(out.loss, "discriminator loss");
    return out;
  }

  const nn::Tensor critic_gap = nn::sub(nn::mean(d_fake), nn::mean(d_real));
  const Eigen::Index m = conditions.rows();
  Matrix between(m, real.cols());
  for (Eigen::Index j = 0; j < m; ++j) {
    const double eps = uniform01(rng);
    between.row(j) = eps * real.row(j) + (1.0 - eps) * fake.row(j);
  }
  // Unit direction from the fake towards the real sample of each pair. A pair
  // whose two samples coincide falls back to a uniformly random direction.
  Matrix direction = real - fake;
  for (Eigen::Index j = 0; j < m; ++j) {
    double norm = direction.row(j).norm();
    while (!(norm > 1e-12)) {
      direction.row(j) = standard_normal(1, real.cols(), rng);
      norm = direction.row(j).norm();
    }
    direction.row(j) /= norm;
  }
  Matrix probes(2 * m, real.cols());
  probes << between + config.gp_step * direction, between;
  Matrix probe_conditions(2 * m, conditions.cols());
  probe_conditions << conditions, conditions;
  const nn::Tensor scores = discriminator(probe_conditions, nn::Tensor::constant(probes));
  const nn::Tensor slope =
      nn::scale(nn::sub(nn::slice_rows(scores, 0, m), nn::slice_rows(scores, m, m)), 1.0 / config.gp_step);
  const nn::Tensor gp = nn::mean(nn::square(nn::add_scalar(slope, -1.0)));

  out.loss = nn::add(critic_gap, nn::scale(gp, config.gp_coeff));
  out.adversarial = critic_gap.item();
  out.gradient_penalty = gp.item();
  require_finite(out.loss, "discriminator loss");
  return out;
}

nn::Tensor generator_adversarial_loss(const DiscriminatorFn& discriminator, const Matrix& conditions,
                                      const nn::Tensor& fake, const LossConfig& config) {
  const nn::Tensor d_fake = discriminator(conditions, fake);
  if (config.kind == LossKind::wasserstein_gp) return nn::scale(nn::mean(d_fake), -1.0);
  if (config.non_saturating) return nn::scale(nn::mean(log_prob(d_fake)), -1.0);
  return nn::mean(log_prob(one_minus(d_fake)));
}

GeneratorLoss generator_loss(const GeneratorFn& generator, const DiscriminatorFn& discriminator,
                             const Matrix& conditions, const Matrix& noise,
                             const RegularizerBatch& regularizer, const GanConfig& config) {
  const nn::Tensor fake = generator(conditions, noise);
  const nn::Tensor adversarial = generator_adversarial_loss(discriminator, conditions, fake, config.loss);
  GeneratorLoss out;
  out.adversarial = adversarial.item();
  out.loss = adversarial;
  if (config.lambda > 0.0) {
    const nn::Tensor penalty =
        config.reg_form == RegForm::exact_fd
            ? gr_penalty_exact(generator, regularizer.conditions, noise, config.fd_step)
            : gr_penalty_ratio(generator, regularizer.conditions, noise, regularizer.perturbations,
                               config.tau1);
    out.penalty = penalty.item();
    out.loss = nn::add(adversarial, nn::scale(penalty, config.lambda));
  }
  require_finite(out.loss, "generator loss");
  return out;
}

}  // namespace grcgan::gan
