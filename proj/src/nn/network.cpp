#include "grcgan/nn/network.hpp"

#include <cmath>

#include "grcgan/error.hpp"
#include "grcgan/nn/ops.hpp"

namespace grcgan::nn {

namespace {

Tensor activate(const Tensor& x, const Activation& act) {
  switch (act.kind) {
    case Activation::Kind::identity:
      return x;
    case Activation::Kind::relu:
      return relu(x);
    case Activation::Kind::leaky_relu:
      return leaky_relu(x, act.slope);
    case Activation::Kind::sigmoid:
      return sigmoid(x);
  }
  return x;
}

void activate_in_place(Matrix& x, const Activation& act) {
  switch (act.kind) {
    case Activation::Kind::identity:
      return;
    case Activation::Kind::relu:
      x = x.cwiseMax(0.0);
      return;
    case Activation::Kind::leaky_relu:
      x = (x.array() > 0.0).select(x, act.slope * x);
      return;
    case Activation::Kind::sigmoid:
      x = (1.0 + (-x.array()).exp()).inverse().matrix();
      return;
  }
}

void validate_activation(const Activation& act) {
  if (act.kind == Activation::Kind::leaky_relu && !(act.slope > 0.0 && act.slope < 1.0)) {
    throw ConfigError("LeakyReLU slope must lie in (0, 1)");
  }
}

const char* kind_name(Activation::Kind kind) {
  switch (kind) {
    case Activation::Kind::identity:
      return "identity";
    case Activation::Kind::relu:
      return "relu";
    case Activation::Kind::leaky_relu:
      return "leaky_relu";
    case Activation::Kind::sigmoid:
      return "sigmoid";
  }
  return "identity";
}

Tensor deep_copy(const Tensor& t) {
  Tensor copy = t.requires_grad() ? Tensor::parameter(t.value()) : Tensor::constant(t.value());
  return copy;
}

}  // namespace

void MlpSpec::validate() const {
  if (input_dim == 0 || output_dim == 0) throw ConfigError("MLP input and output dims must be >= 1");
  for (const auto& h : hidden) {
    if (h.width == 0) throw ConfigError("hidden layer width must be >= 1");
    validate_activation(h.activation);
  }
  validate_activation(output_activation);
}

MlpSpec MlpSpec::circular_generator() {
  MlpSpec spec;
  spec.input_dim = 4;
  spec.hidden.assign(6, HiddenLayerSpec{100, Activation::relu(), true});
  spec.output_dim = 2;
  spec.output_activation = Activation::identity();
  return spec;
}

MlpSpec MlpSpec::circular_discriminator() {
  MlpSpec spec;
  spec.input_dim = 4;
  spec.hidden.assign(5, HiddenLayerSpec{100, Activation::relu(), false});
  spec.output_dim = 1;
  spec.output_activation = Activation::sigmoid();
  return spec;
}

MlpSpec MlpSpec::mvn_generator(std::size_t condition_dim, std::size_t output_dim) {
  MlpSpec spec;
  spec.input_dim = condition_dim + output_dim;  // noise has the output's dimension
  spec.hidden.assign(3, HiddenLayerSpec{512, Activation::leaky_relu(0.1), false});
  spec.output_dim = output_dim;
  spec.output_activation = Activation::identity();
  return spec;
}

MlpSpec MlpSpec::mvn_discriminator(std::size_t total_dim) {
  MlpSpec spec;
  spec.input_dim = total_dim;
  spec.hidden.assign(3, HiddenLayerSpec{512, Activation::leaky_relu(0.1), false});
  spec.output_dim = 1;
  spec.output_activation = Activation::identity();
  return spec;
}

void to_json(nlohmann::json& j, const Activation& a) {
  j = nlohmann::json{{"kind", kind_name(a.kind)}};
  if (a.kind == Activation::Kind::leaky_relu) j["slope"] = a.slope;
}

void from_json(const nlohmann::json& j, Activation& a) {
  const auto kind = j.at("kind").get<std::string>();
  a.slope = 0.0;
  if (kind == "identity") {
    a.kind = Activation::Kind::identity;
  } else if (kind == "relu") {
    a.kind = Activation::Kind::relu;
  } else if (kind == "leaky_relu") {
    a.kind = Activation::Kind::leaky_relu;
    a.slope = j.at("slope").get<double>();
  } else if (kind == "sigmoid") {
    a.kind = Activation::Kind::sigmoid;
  } else {
    throw ConfigError("unknown activation '" + kind + "'");
  }
}

void to_json(nlohmann::json& j, const MlpSpec& spec) {
  nlohmann::json hidden = nlohmann::json::array();
  for (const auto& h : spec.hidden) {
    hidden.push_back({{"width", h.width}, {"activation", h.activation}, {"batch_norm", h.batch_norm}});
  }
  j = nlohmann::json{{"input_dim", spec.input_dim},
                     {"hidden", hidden},
                     {"output_dim", spec.output_dim},
                     {"output_activation", spec.output_activation}};
}

void from_json(const nlohmann::json& j, MlpSpec& spec) {
  spec.input_dim = j.at("input_dim").get<std::size_t>();
  spec.output_dim = j.at("output_dim").get<std::size_t>();
  spec.output_activation = j.at("output_activation").get<Activation>();
  spec.hidden.clear();
  for (const auto& h : j.at("hidden")) {
    spec.hidden.push_back({h.at("width").get<std::size_t>(), h.at("activation").get<Activation>(),
                           h.at("batch_norm").get<bool>()});
  }
}

Network::Network(MlpSpec spec) : spec_(std::move(spec)) {
  spec_.validate();
  build(nullptr);
}

Network::Network(MlpSpec spec, Rng& rng) : spec_(std::move(spec)) {
  spec_.validate();
  build(&rng);
}

Network::Network(const Network& other) : spec_(other.spec_) {
  blocks_.reserve(other.blocks_.size());
  for (const auto& b : other.blocks_) {
    Block copy{{deep_copy(b.dense.weight), deep_copy(b.dense.bias)}, std::nullopt, b.activation};
    if (b.batch_norm) {
      copy.batch_norm = BatchNormLayer{deep_copy(b.batch_norm->gamma), deep_copy(b.batch_norm->beta),
                                       b.batch_norm->running_mean, b.batch_norm->running_var};
    }
    blocks_.push_back(std::move(copy));
  }
}

Network& Network::operator=(const Network& other) {
  if (this != &other) *this = Network(other);
  return *this;
}

void Network::build(Rng* rng) {
  blocks_.clear();
  std::size_t fan_in = spec_.input_dim;
  auto make_dense = [&](std::size_t in, std::size_t out) {
    Matrix w = Matrix::Zero(static_cast<Index>(in), static_cast<Index>(out));
    Matrix b = Matrix::Zero(1, static_cast<Index>(out));
    if (rng != nullptr) {
      const double bound = 1.0 / std::sqrt(static_cast<double>(in));
      w = uniform_matrix(w.rows(), w.cols(), -bound, bound, *rng);
      b = uniform_matrix(1, b.cols(), -bound, bound, *rng);
    }
    return DenseLayer{Tensor::parameter(std::move(w)), Tensor::parameter(std::move(b))};
  };
  for (const auto& h : spec_.hidden) {
    Block block{make_dense(fan_in, h.width), std::nullopt, h.activation};
    if (h.batch_norm) {
      const auto w = static_cast<Index>(h.width);
      block.batch_norm = BatchNormLayer{Tensor::parameter(Matrix::Ones(1, w)),
                                        Tensor::parameter(Matrix::Zero(1, w)),
                                        Eigen::RowVectorXd::Zero(w), Eigen::RowVectorXd::Ones(w)};
    }
    blocks_.push_back(std::move(block));
    fan_in = h.width;
  }
  blocks_.push_back(Block{make_dense(fan_in, spec_.output_dim), std::nullopt, spec_.output_activation});
}

Tensor Network::forward(const Tensor& input, Mode mode, bool update_running_stats) {
  if (input.cols() != static_cast<Index>(spec_.input_dim)) {
    throw ShapeError("network expects " + std::to_string(spec_.input_dim) + " input columns, got " +
                     std::to_string(input.cols()));
  }
  Tensor h = input;
  for (auto& block : blocks_) {
    h = linear(h, block.dense.weight, block.dense.bias);
    if (block.batch_norm) {
      auto& bn = *block.batch_norm;
      if (mode == Mode::train) {
        Eigen::RowVectorXd mu;
        Eigen::RowVectorXd var;
        h = batch_norm_train(h, bn.gamma, bn.beta, BatchNormLayer::kEpsilon, &mu, &var);
        if (update_running_stats) {
          const double n = static_cast<double>(input.rows());
          const double m = BatchNormLayer::kMomentum;
          bn.running_mean = m * bn.running_mean + (1.0 - m) * mu;
          bn.running_var = m * bn.running_var + (1.0 - m) * (var * (n / (n - 1.0)));
        }
      } else {
        h = batch_norm_eval(h, bn.gamma, bn.beta, bn.running_mean, bn.running_var,
                            BatchNormLayer::kEpsilon);
      }
    }
    h = activate(h, block.activation);
  }
  if (!all_finite(h.value())) throw NonFiniteError("network produced a non-finite output");
  return h;
}

Matrix Network::predict(const Matrix& input) const {
  if (input.cols() != static_cast<Index>(spec_.input_dim)) {
    throw ShapeError("network expects " + std::to_string(spec_.input_dim) + " input columns, got " +
                     std::to_string(input.cols()));
  }
  Matrix h = input;
  for (const auto& block : blocks_) {
    Matrix next(h.rows(), block.dense.weight.cols());
    next.noalias() = h * block.dense.weight.value();
    next.rowwise() += block.dense.bias.value().row(0);
    if (block.batch_norm) {
      const auto& bn = *block.batch_norm;
      const Eigen::RowVectorXd inv_std = (bn.running_var.array() + BatchNormLayer::kEpsilon).rsqrt();
      next = ((next.rowwise() - bn.running_mean).array().rowwise() * inv_std.array())
                 .rowwise() *
             bn.gamma.value().row(0).array();
      next.rowwise() += bn.beta.value().row(0);
    }
    activate_in_place(next, block.activation);
    h = std::move(next);
  }
  if (!all_finite(h)) throw NonFiniteError("network produced a non-finite output");
  return h;
}

std::vector<Tensor> Network::parameters() const {
  std::vector<Tensor> params;
  for (const auto& block : blocks_) {
    params.push_back(block.dense.weight);
    params.push_back(block.dense.bias);
    if (block.batch_norm) {
      params.push_back(block.batch_norm->gamma);
      params.push_back(block.batch_norm->beta);
    }
  }
  return params;
}

void Network::zero_grad() {
  for (auto& p : parameters()) p.zero_grad();
}

void Network::set_requires_grad(bool flag) {
  for (auto& p : parameters()) p.set_requires_grad(flag);
}

}  // namespace grcgan::nn
