#pragma once

#include "grcgan/gan/networks.hpp"
#include "grcgan/random.hpp"

namespace grcgan::gan {

inline constexpr double kProbabilityFloor = 1e-7;

struct DiscriminatorLoss {
  nn::Tensor loss;
  double adversarial = 0.0;
  double gradient_penalty = 0.0;  // unweighted; WassersteinGP only
};

/// Loss minimized by the discriminator.
///
/// VanillaBCE: -(mean log D(x, y) + mean log(1 - D(x, G))) with probabilities
/// clamped to [1e-7, 1 - 1e-7].
/// WassersteinGP: mean D(x, G) - mean D(x, y) + gp_coeff * mean((s - 1)^2),
/// where s = (D(x, u + delta v) - D(x, u)) / delta, u = eps y + (1 - eps) G
/// with eps ~ U[0, 1] per row, and v the unit vector from G towards y. Along
/// that line an optimal critic has slope exactly 1, whereas the slope along a
/// symmetric random direction averages to 0 and cannot be pushed to 1. `rng`
/// is only consumed by the Wasserstein variant.
DiscriminatorLoss discriminator_loss(const DiscriminatorFn& discriminator, const Matrix& conditions,
                                     const Matrix& real, const Matrix& fake, const LossConfig& config,
                                     Rng& rng);

/// Adversarial part of the generator loss for samples `fake` generated at
/// `conditions`: mean log(1 - D) (saturating), -mean log D (non-saturating),
/// or -mean D (Wasserstein).
nn::Tensor generator_adversarial_loss(const DiscriminatorFn& discriminator, const Matrix& conditions,
                                      const nn::Tensor& fake, const LossConfig& config);

/// Where the regularizer is evaluated: interpolated conditions and, for the
/// ratio form, one perturbation per row.
struct RegularizerBatch {
  Matrix conditions;
  Matrix perturbations;
};

struct GeneratorLoss {
  nn::Tensor loss;
  double adversarial = 0.0;
  double penalty = 0.0;  // unweighted; 0 and never evaluated when lambda == 0
};

/// Adversarial term at (x, z) plus lambda times the configured penalty at
/// (regularizer.conditions, z).
GeneratorLoss generator_loss(const GeneratorFn& generator, const DiscriminatorFn& discriminator,
                             const Matrix& conditions, const Matrix& noise,
                             const RegularizerBatch& regularizer, const GanConfig& config);

}  // namespace grcgan::gan
