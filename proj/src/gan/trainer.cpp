#include "grcgan/gan/trainer.hpp"

#include <chrono>
#include <ostream>

#include "grcgan/data/dataset.hpp"
#include "grcgan/gan/losses.hpp"
#include "grcgan/gan/networks.hpp"
#include "grcgan/gan/sampling.hpp"
#include "grcgan/nn/adam.hpp"

namespace grcgan::gan {

std::string TrainingLog::csv_row(const LogRow& row) {
  return std::to_string(row.iter) + "," + data::format_double(row.d_loss) + "," +
         data::format_double(row.g_adv) + "," + data::format_double(row.g_reg) + "," +
         data::format_double(row.wall_ms);
}

void TrainingLog::write_csv(std::ostream& out) const {
  out << csv_header() << '\n';
  for (const auto& row : rows) out << csv_row(row) << '\n';
}

namespace {

void check_dimensions(const data::LabeledDataset& dataset, const nn::MlpSpec& g, const nn::MlpSpec& d,
                      const GanConfig& config, ConditionEncoding encoding) {
  const auto p = static_cast<std::size_t>(dataset.conditions.cols());
  const auto q = static_cast<std::size_t>(dataset.outputs.cols());
  const auto enc = encoded_dim(p, encoding);
  if (g.input_dim != config.noise_dim + enc) throw ShapeError("generator input must be noise_dim + encoded condition dim");
  if (g.output_dim != q) throw ShapeError("generator output must match dataset outputs");
  if (d.input_dim != q + enc) throw ShapeError("discriminator input must be output dim + encoded condition dim");
  if (d.output_dim != 1) throw ShapeError("discriminator must produce one score");
}

}  // namespace

TrainResult train(const data::LabeledDataset& dataset, const nn::MlpSpec& generator_spec,
                  const nn::MlpSpec& discriminator_spec, const GanConfig& config,
                  ConditionEncoding encoding, const TrainOptions& options) {
  dataset.validate();
  config.validate();
  check_dimensions(dataset, generator_spec, discriminator_spec, config, encoding);

  Rng rng = make_rng(config.seed);
  nn::Network generator(generator_spec, rng);
  nn::Network discriminator(discriminator_spec, rng);
  nn::Adam adam_g(generator.parameters(), config.adam_generator);
  nn::Adam adam_d(discriminator.parameters(), config.adam_discriminator);

  const GeneratorFn g_fn = network_generator(generator, encoding, nn::Mode::train);
  const DiscriminatorFn d_fn = network_discriminator(discriminator, encoding);
  const auto m = static_cast<Eigen::Index>(config.batch_size);
  const auto noise_dim = static_cast<Eigen::Index>(config.noise_dim);
  const auto p = static_cast<std::size_t>(dataset.conditions.cols());
  const Eigen::Index n = dataset.size();

  TrainingLog log;
  log.rows.reserve(config.iterations);
  const auto start = std::chrono::steady_clock::now();

  for (std::size_t iter = 1; iter <= config.iterations; ++iter) {
    LogRow row;
    row.iter = iter;
    try {
      for (std::size_t t = 0; t < config.n_critic; ++t) {
        const auto idx = sample_batch_indices(n, m, rng);
        const Matrix x = gather_rows(dataset.conditions, idx);
        const Matrix y = gather_rows(dataset.outputs, idx);
        const Matrix z = standard_normal(m, noise_dim, rng);
        Matrix fake;
        {
          nn::NoGradGuard no_grad;
          fake = g_fn(x, z).value();
        }
        adam_d.zero_grad();
        const auto d_loss = discriminator_loss(d_fn, x, y, fake, config.loss, rng);
        d_loss.loss.backward();
        adam_d.step();
        row.d_loss = d_loss.loss.item();
      }

      const Matrix x = gather_rows(dataset.conditions, sample_batch_indices(n, m, rng));
      const bool regularized = config.lambda > 0.0;
      Matrix x_prime;
      if (regularized) x_prime = gather_rows(dataset.conditions, sample_batch_indices(n, m, rng));
      const Matrix z = standard_normal(m, noise_dim, rng);
      RegularizerBatch reg;
      if (regularized) {
        reg.conditions = sample_interpolated_conditions(x, x_prime, rng);
        if (!config.interpolate) reg.conditions = x;
        if (config.reg_form == RegForm::ratio) {
          reg.perturbations = sample_perturbations(m, p, config.perturbation, config.tau2, rng);
        }
      }

      adam_g.zero_grad();
      discriminator.set_requires_grad(false);
      GeneratorLoss g_loss;
      try {
        g_loss = generator_loss(g_fn, d_fn, x, z, reg, config);
      } catch (...) {
        discriminator.set_requires_grad(true);
        throw;
      }
      discriminator.set_requires_grad(true);
      g_loss.loss.backward();
      adam_g.step();
      row.g_adv = g_loss.adversarial;
      row.g_reg = g_loss.penalty;
    } catch (const NonFiniteError& e) {
      throw TrainingDiverged("training diverged at iteration " + std::to_string(iter) + " (last d_loss=" +
                                 data::format_double(row.d_loss) + "): " + e.what(),
                             std::move(log));
    }
    if (options.record_wall_clock) {
      row.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    }
    log.rows.push_back(row);
    if (options.on_iteration) options.on_iteration(row);
  }

  adam_g.zero_grad();
  adam_d.zero_grad();
  return TrainResult{std::move(generator), std::move(discriminator), std::move(log), rng};
}

nn::Matrix generate(const nn::Network& generator, const Eigen::RowVectorXd& condition, std::size_t count,
                    ConditionEncoding encoding, std::size_t noise_dim, Rng& rng) {
  const auto rows = static_cast<Eigen::Index>(count);
  const Matrix z = standard_normal(rows, static_cast<Eigen::Index>(noise_dim), rng);
  if (rows == 0) return Matrix(0, static_cast<Eigen::Index>(generator.spec().output_dim));
  const Matrix x = condition.replicate(rows, 1);
  return predict_samples(generator, encoding, x, z);
}

}  // namespace grcgan::gan
