#pragma once

#include <functional>
#include <string>

#include "grcgan/nn/tensor.hpp"

namespace grcgan::nn {

struct GradCheckResult {
  std::string name;
  double relative_error = 0.0;
  double tolerance = 0.0;
  bool passed = false;
};

/// Compares the analytic gradient of `loss_fn` with respect to `target`
/// against central differences of step `h`.
///
/// `loss_fn` must rebuild its graph on every call and be deterministic.
/// The error is ||analytic - numeric|| / max(||analytic||, ||numeric||, floor).
/// Central differences of an exactly flat loss still carry rounding noise of
/// order 1e-16 / h, and the floor keeps that noise from failing a gradient
/// that is truly zero. Gradients
/// that the check leaves in other leaves are the caller's to clear.
GradCheckResult check_gradient(std::string name, const std::function<Tensor()>& loss_fn,
                               Tensor target, double h, double tolerance, double scale_floor = 1e-6);

}  // namespace grcgan::nn
