#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "grcgan/nn/tensor.hpp"
#include "grcgan/random.hpp"

namespace grcgan::nn {

struct Activation {
  enum class Kind { identity, relu, leaky_relu, sigmoid };
  Kind kind = Kind::identity;
  double slope = 0.0;  // LeakyReLU only

  static Activation identity() { return {Kind::identity, 0.0}; }
  static Activation relu() { return {Kind::relu, 0.0}; }
  static Activation leaky_relu(double slope) { return {Kind::leaky_relu, slope}; }
  static Activation sigmoid() { return {Kind::sigmoid, 0.0}; }

  bool operator==(const Activation&) const = default;
};

struct HiddenLayerSpec {
  std::size_t width = 0;
  Activation activation = Activation::relu();
  bool batch_norm = false;

  bool operator==(const HiddenLayerSpec&) const = default;
};

/// Architecture of a fully connected network.
struct MlpSpec {
  std::size_t input_dim = 0;
  std::vector<HiddenLayerSpec> hidden;
  std::size_t output_dim = 0;
  Activation output_activation = Activation::identity();

  /// Throws ConfigError on zero widths or a LeakyReLU slope outside (0, 1).
  void validate() const;

  /// Six fc(100)+BN+ReLU blocks on concat(z in R^2, sin x, cos x), fc -> 2.
  static MlpSpec circular_generator();
  /// Five fc(100)+ReLU blocks on concat(y, sin x, cos x), fc -> 1, sigmoid.
  static MlpSpec circular_discriminator();
  /// Three fc(512)+LeakyReLU(0.1) blocks on concat(z, x), fc -> k - p.
  static MlpSpec mvn_generator(std::size_t condition_dim, std::size_t output_dim);
  /// Three fc(512)+LeakyReLU(0.1) blocks on concat(y, x), fc -> 1, no sigmoid.
  static MlpSpec mvn_discriminator(std::size_t total_dim);

  bool operator==(const MlpSpec&) const = default;
};

void to_json(nlohmann::json& j, const Activation& a);
void from_json(const nlohmann::json& j, Activation& a);
void to_json(nlohmann::json& j, const MlpSpec& spec);
void from_json(const nlohmann::json& j, MlpSpec& spec);

enum class Mode { train, eval };

struct DenseLayer {
  Tensor weight;  // (in, out)
  Tensor bias;    // (1, out)
};

struct BatchNormLayer {
  static constexpr double kMomentum = 0.9;
  static constexpr double kEpsilon = 1e-5;

  Tensor gamma;
  Tensor beta;
  Eigen::RowVectorXd running_mean;
  Eigen::RowVectorXd running_var;
};

struct Block {
  DenseLayer dense;
  std::optional<BatchNormLayer> batch_norm;
  Activation activation;
};

/// Parameter state of an MLP built from an MlpSpec.
///
/// Dense weights and biases start uniform in +-1/sqrt(fan_in); batch-norm
/// scale 1, shift 0, running mean 0 and running variance 1. Running
/// statistics follow r <- 0.9 r + 0.1 batch, where the variance fed to the
/// running estimate is the unbiased batch variance.
class Network {
 public:
  /// Zero-initialized parameters; used when restoring checkpoints.
  explicit Network(MlpSpec spec);
  Network(MlpSpec spec, Rng& rng);

  Network(const Network& other);
  Network& operator=(const Network& other);
  Network(Network&&) noexcept = default;
  Network& operator=(Network&&) noexcept = default;

  const MlpSpec& spec() const { return spec_; }

  /// Records a graph when grad mode is on. In train mode batch-norm uses
  /// batch statistics and, if `update_running_stats`, folds them into the
  /// running estimates. Throws ShapeError or NonFiniteError.
  Tensor forward(const Tensor& input, Mode mode, bool update_running_stats = true);

  /// Eval-mode forward without any graph. Safe to call concurrently.
  Matrix predict(const Matrix& input) const;

  std::vector<Tensor> parameters() const;
  void zero_grad();
  void set_requires_grad(bool flag);

  std::vector<Block>& blocks() { return blocks_; }
  const std::vector<Block>& blocks() const { return blocks_; }

 private:
  void build(Rng* rng);
  MlpSpec spec_;
  std::vector<Block> blocks_;
};

}  // namespace grcgan::nn
