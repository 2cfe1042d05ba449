#include "grcgan/experiment/gradient_suite.hpp"

#include <iomanip>
#include <limits>
#include <ostream>

#include "grcgan/gan/losses.hpp"
#include "grcgan/gan/penalty.hpp"
#include "grcgan/nn/network.hpp"
#include "grcgan/nn/ops.hpp"

namespace grcgan::experiment {

namespace {

using nn::Tensor;

constexpr double kPenaltyFloor = 1e-5;

Tensor random_parameter(Eigen::Index rows, Eigen::Index cols, Rng& rng) {
  return Tensor::parameter(uniform_matrix(rows, cols, -1.0, 1.0, rng));
}

Tensor squared_error(const Tensor& out, const nn::Matrix& target) {
  return nn::mean(nn::square(nn::sub(out, Tensor::constant(target))));
}

void check_layer(std::vector<nn::GradCheckResult>& results, const std::string& name,
                 const std::function<Tensor(const Tensor&)>& layer, std::vector<std::pair<std::string, Tensor>> params,
                 Tensor input, const nn::Matrix& target, const GradientSuiteOptions& o) {
  const auto loss = [&] { return squared_error(layer(input), target); };
  params.emplace_back("input", input);
  for (auto& [pname, p] : params) {
    results.push_back(nn::check_gradient(name + "/" + pname, loss, p, o.step, o.layer_tolerance));
    for (auto& [_, q] : params) q.zero_grad();
  }
}

void check_network(std::vector<nn::GradCheckResult>& results, const std::string& name, nn::Network& net,
                   const nn::Matrix& input, const nn::Matrix& target, double h, double tol) {
  Tensor x = Tensor::constant(input);
  const auto loss = [&] { return squared_error(net.forward(x, nn::Mode::train), target); };
  auto params = net.parameters();
  for (std::size_t i = 0; i < params.size(); ++i) {
    results.push_back(nn::check_gradient(name + "/param" + std::to_string(i), loss, params[i], h, tol));
    net.zero_grad();
  }
}

void check_over_params(std::vector<nn::GradCheckResult>& results, const std::string& name,
                       const std::function<Tensor()>& loss, nn::Network& net, double h, double tol,
                       double floor = 1e-6) {
  auto params = net.parameters();
  for (std::size_t i = 0; i < params.size(); ++i) {
    results.push_back(nn::check_gradient(name + "/param" + std::to_string(i), loss, params[i], h, tol, floor));
    net.zero_grad();
  }
}

}  // namespace

std::vector<nn::GradCheckResult> run_gradient_suite(const GradientSuiteOptions& options) {
  GradientSuiteOptions o = options;
  if (!o.linear) o.linear = [](const Tensor& x, const Tensor& w, const Tensor& b) { return nn::linear(x, w, b); };
  Rng rng = make_rng(o.seed);
  std::vector<nn::GradCheckResult> results;

  const Eigen::Index m = 6, in = 4, out = 3;
  const nn::Matrix target = standard_normal(m, out, rng);
  {
    Tensor w = random_parameter(in, out, rng), b = random_parameter(1, out, rng);
    Tensor x = random_parameter(m, in, rng);
    check_layer(results, "dense", [&](const Tensor& t) { return o.linear(t, w, b); }, {{"weight", w}, {"bias", b}},
                x, target, o);
  }
  {
    Tensor gamma = Tensor::parameter(uniform_matrix(1, out, 0.5, 1.5, rng));
    Tensor beta = random_parameter(1, out, rng);
    Tensor x = random_parameter(m, out, rng);
    check_layer(results, "batch_norm_train",
                [&](const Tensor& t) {
                  return nn::batch_norm_train(t, gamma, beta, nn::BatchNormLayer::kEpsilon, nullptr, nullptr);
                },
                {{"gamma", gamma}, {"beta", beta}}, x, target, o);
  }
  const std::vector<std::pair<std::string, std::function<Tensor(const Tensor&)>>> activations = {
      {"relu", [](const Tensor& t) { return nn::relu(t); }},
      {"leaky_relu", [](const Tensor& t) { return nn::leaky_relu(t, 0.1); }},
      {"sigmoid", [](const Tensor& t) { return nn::sigmoid(t); }},
  };
  for (const auto& [name, act] : activations) {
    Tensor w = random_parameter(in, out, rng), b = random_parameter(1, out, rng);
    Tensor x = random_parameter(m, in, rng);
    check_layer(results, name, [&, act = act](const Tensor& t) { return act(o.linear(t, w, b)); },
                {{"weight", w}, {"bias", b}}, x, target, o);
  }

  // Whole networks built from the presets' layer kinds, scaled down.
  {
    nn::MlpSpec spec{4, {{5, nn::Activation::relu(), true}, {5, nn::Activation::relu(), true}}, 2,
                     nn::Activation::identity()};
    nn::Network net(spec, rng);
    check_network(results, "mlp_bn_relu", net, standard_normal(8, 4, rng), standard_normal(8, 2, rng), o.step,
                  o.layer_tolerance);
  }
  {
    nn::MlpSpec spec{3, {{5, nn::Activation::leaky_relu(0.1), false}, {5, nn::Activation::leaky_relu(0.1), false}},
                     1, nn::Activation::sigmoid()};
    nn::Network net(spec, rng);
    check_network(results, "mlp_leaky_sigmoid", net, standard_normal(8, 3, rng), uniform_matrix(8, 1, 0, 1, rng),
                  o.step, o.layer_tolerance);
  }

  // Discriminator losses over discriminator parameters.
  const std::size_t batch = 8;
  const nn::Matrix angles = uniform_matrix(batch, 1, 0.0, 6.2, rng);
  const nn::Matrix real = standard_normal(batch, 2, rng);
  const nn::Matrix fake = standard_normal(batch, 2, rng);
  for (const auto kind : {gan::LossKind::vanilla_bce, gan::LossKind::wasserstein_gp}) {
    const bool bce = kind == gan::LossKind::vanilla_bce;
    nn::MlpSpec spec{4, {{6, nn::Activation::leaky_relu(0.1), false}}, 1,
                     bce ? nn::Activation::sigmoid() : nn::Activation::identity()};
    nn::Network d(spec, rng);
    const gan::DiscriminatorFn d_fn = gan::network_discriminator(d, gan::ConditionEncoding::sin_cos);
    const gan::LossConfig cfg{kind, bce ? 0.0 : 0.1, 1e-3, false};
    const auto loss = [&] {
      Rng local = make_rng(o.seed + 1);
      return gan::discriminator_loss(d_fn, angles, real, fake, cfg, local).loss;
    };
    check_over_params(results, bce ? "d_loss_bce" : "d_loss_wgan_gp", loss, d, o.step, o.layer_tolerance);
  }

  // Both penalties over generator parameters, on a batch-normalized generator
  // with the circular condition encoding. The penalties divide by their own
  // small step, which inflates rounding noise, hence the larger floor.
  {
    nn::MlpSpec spec{4, {{6, nn::Activation::relu(), true}, {6, nn::Activation::relu(), true}}, 2,
                     nn::Activation::identity()};
    nn::Network g(spec, rng);
    const gan::GeneratorFn g_fn = gan::network_generator(g, gan::ConditionEncoding::sin_cos, nn::Mode::train);
    const nn::Matrix noise = standard_normal(batch, 2, rng);
    nn::Matrix dx(batch, 1);
    for (Eigen::Index i = 0; i < dx.rows(); ++i) dx(i, 0) = uniform01(rng) < 0.5 ? -0.1 : 0.1;
    check_over_params(results, "penalty_exact",
                      [&] { return gan::gr_penalty_exact(g_fn, angles, noise, 1e-3); }, g, o.step,
                      o.penalty_tolerance, kPenaltyFloor);
    check_over_params(results, "penalty_ratio",
                      [&] {
                        return gan::gr_penalty_ratio(g_fn, angles, noise, dx,
                                                     std::numeric_limits<double>::infinity());
                      },
                      g, o.step, o.penalty_tolerance, kPenaltyFloor);
  }
  return results;
}

bool print_gradient_report(std::ostream& out, const std::vector<nn::GradCheckResult>& results) {
  bool all = true;
  for (const auto& r : results) {
    out << (r.passed ? "PASS " : "FAIL ") << std::left << std::setw(32) << r.name << " rel_err "
        << std::scientific << std::setprecision(3) << r.relative_error << " (tol " << r.tolerance << ")"
        << std::defaultfloat << '\n';
    all = all && r.passed;
  }
  out << (all ? "all " : "some ") << "gradient checks " << (all ? "passed" : "FAILED") << " (" << results.size()
      << " checks)\n";
  return all;
}

}  // namespace grcgan::experiment
