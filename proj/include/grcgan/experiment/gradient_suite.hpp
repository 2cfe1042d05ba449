#pragma once

#include <functional>
#include <iosfwd>
#include <vector>

#include "grcgan/nn/gradcheck.hpp"

namespace grcgan::experiment {

struct GradientSuiteOptions {
  double step = 1e-5;
  double layer_tolerance = 1e-4;
  double penalty_tolerance = 1e-3;
  std::uint64_t seed = 7;
  /// Dense op used by the single-layer checks. Tests swap in a broken one to
  /// make sure the suite notices.
  std::function<nn::Tensor(const nn::Tensor&, const nn::Tensor&, const nn::Tensor&)> linear;
};

/// Finite-difference checks of every layer kind (dense, batch norm in train
/// mode, ReLU, LeakyReLU, Sigmoid) over parameters and inputs, whole small
/// networks, both discriminator losses, and both generator penalties over
/// generator parameters.
std::vector<nn::GradCheckResult> run_gradient_suite(const GradientSuiteOptions& options = {});

/// One line per check; returns true when all passed.
bool print_gradient_report(std::ostream& out, const std::vector<nn::GradCheckResult>& results);

}  // namespace grcgan::experiment
