#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>

#include <json.hpp>

#include "grcgan/nn/adam.hpp"

namespace grcgan::gan {

enum class LossKind { vanilla_bce, wasserstein_gp };

struct LossConfig {
  LossKind kind = LossKind::vanilla_bce;
  double gp_coeff = 0.0;   // WassersteinGP only
  double gp_step = 1e-3;   // finite-difference step of the critic penalty
  bool non_saturating = false;  // VanillaBCE generator term -log D(G) instead of log(1 - D(G))
};

enum class RegForm { exact_fd, ratio };

struct PerturbationLaw {
  enum class Kind { sphere_surface, gaussian_iso };
  Kind kind = Kind::sphere_surface;
  double scale = 0.1;  // sphere radius or Gaussian sigma
};

/// How raw conditions are fed to the networks. Penalties always perturb the
/// raw condition and re-encode.
enum class ConditionEncoding { raw, sin_cos };

struct GanConfig {
  LossConfig loss;
  double lambda = 0.0;
  RegForm reg_form = RegForm::exact_fd;
  double fd_step = 1e-3;  // h of the central-difference Jacobian
  double tau1 = std::numeric_limits<double>::infinity();
  double tau2 = 1e-6;
  PerturbationLaw perturbation;
  /// Regularize at interpolated condition pairs (true) or at the observed
  /// batch conditions only (false).
  bool interpolate = true;
  std::size_t n_critic = 1;
  std::size_t batch_size = 128;
  std::size_t iterations = 6000;
  std::size_t noise_dim = 2;
  nn::AdamOptions adam_generator;
  nn::AdamOptions adam_discriminator;
  std::uint64_t seed = 0;

  /// Throws ConfigError on any violated constraint.
  void validate() const;

  /// Circular 2-D Gaussians: BCE, lambda 0.02, central-difference penalty,
  /// 6000 iterations, batch 128, Adam(5e-5, 0.5, 0.999).
  static GanConfig circular_preset();
  /// Multivariate Gaussian: WGAN-GP 0.1, lambda 1, ratio penalty with
  /// sphere radius 0.1, tau1 = inf, 50000 iterations, batch 256,
  /// Adam(2e-5, 0.5, 0.9), noise of the output's dimension.
  static GanConfig mvn_preset(std::size_t output_dim);
};

void to_json(nlohmann::json& j, const GanConfig& config);
/// Strict: unknown or missing keys raise ConfigError.
void from_json(const nlohmann::json& j, GanConfig& config);

const char* to_string(ConditionEncoding encoding);
ConditionEncoding encoding_from_string(const std::string& name);

}  // namespace grcgan::gan
