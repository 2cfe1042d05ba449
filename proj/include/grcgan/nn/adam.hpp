#pragma once

#include <cstdint>
#include <vector>

#include "grcgan/nn/tensor.hpp"

namespace grcgan::nn {

struct AdamOptions {
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

struct AdamState {
  std::int64_t step = 0;
  std::vector<Matrix> first_moment;
  std::vector<Matrix> second_moment;
};

/// Bias-corrected Adam over a fixed parameter list.
class Adam {
 public:
  Adam(std::vector<Tensor> params, AdamOptions options);

  /// Applies one update from the accumulated gradients (missing gradients
  /// count as zero). A non-finite gradient rejects the whole step with
  /// NonFiniteError and leaves parameters and state untouched.
  void step();
  void zero_grad();

  const AdamState& state() const { return state_; }
  const AdamOptions& options() const { return options_; }

 private:
  std::vector<Tensor> params_;
  AdamOptions options_;
  AdamState state_;
};

}  // namespace grcgan::nn
