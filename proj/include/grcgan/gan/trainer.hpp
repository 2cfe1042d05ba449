#pragma once

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "grcgan/data/dataset.hpp"
#include "grcgan/error.hpp"
#include "grcgan/gan/config.hpp"
#include "grcgan/nn/network.hpp"

namespace grcgan::gan {

struct LogRow {
  std::size_t iter = 0;
  double d_loss = 0.0;  // last critic step of the iteration
  double g_adv = 0.0;
  double g_reg = 0.0;   // unweighted penalty, 0 when lambda == 0
  double wall_ms = 0.0;
};

struct TrainingLog {
  std::vector<LogRow> rows;

  static const char* csv_header() { return "iter,d_loss,g_adv,g_reg,wall_ms"; }
  static std::string csv_row(const LogRow& row);
  void write_csv(std::ostream& out) const;
};

/// Thrown when a loss turns non-finite. Carries everything logged so far.
class TrainingDiverged : public NonFiniteError {
 public:
  TrainingDiverged(const std::string& what, TrainingLog partial) : NonFiniteError(what), log(std::move(partial)) {}
  TrainingLog log;
};

struct TrainOptions {
  /// Called after every outer iteration, e.g. to flush a CSV incrementally.
  std::function<void(const LogRow&)> on_iteration;
  /// Off by default so that logs are byte-identical across reruns.
  bool record_wall_clock = false;
};

struct TrainResult {
  nn::Network generator;
  nn::Network discriminator;
  TrainingLog log;
  Rng rng;  // stream state after the last iteration
};

/// GAN training with generator regularization.
///
/// Each of `config.iterations` outer iterations runs `config.n_critic`
/// discriminator updates, each on a fresh real batch and fresh noise, then
/// one generator update. The generator update draws two independent batches
/// of training conditions x and x', noise z, one eps ~ U[0, 1] per row,
/// forms x'' = eps x + (1 - eps) x' (or uses x when interpolation is off),
/// draws perturbations for the ratio form, and minimizes the adversarial
/// term at (x, z) plus lambda times the penalty at (x'', z).
///
/// Everything is drawn from one mt19937_64 stream seeded with config.seed,
/// in this order: network init (G then D); per critic step: batch indices,
/// noise, and for WGAN-GP the interpolation weights plus a replacement
/// direction for any coinciding real/fake pair; per generator step: indices
/// of x, indices of x', noise, eps, then perturbations (ratio form only).
/// With lambda == 0 the x', eps and perturbation draws are skipped, so the
/// stream matches an unregularized conditional GAN.
TrainResult train(const data::LabeledDataset& dataset, const nn::MlpSpec& generator_spec,
                  const nn::MlpSpec& discriminator_spec, const GanConfig& config,
                  ConditionEncoding encoding, const TrainOptions& options = {});

/// `count` samples G(x, z_i), z_i ~ N(0, I), in eval mode.
nn::Matrix generate(const nn::Network& generator, const Eigen::RowVectorXd& condition, std::size_t count,
                    ConditionEncoding encoding, std::size_t noise_dim, Rng& rng);

}  // namespace grcgan::gan
