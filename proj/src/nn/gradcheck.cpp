#include "grcgan/nn/gradcheck.hpp"

#include <algorithm>

namespace grcgan::nn {


GradCheckResult check_gradient(std::string name, const std::function<Tensor()>& loss_fn,
                               Tensor target, double h, double tolerance, double scale_floor) {
  const bool had_flag = target.requires_grad();
  target.set_requires_grad(true);
  target.zero_grad();
  loss_fn().backward();
  const Matrix analytic = target.grad();
  target.zero_grad();

  Matrix numeric(target.rows(), target.cols());
  {
    NoGradGuard guard;
    Matrix& value = target.mutable_value();
    for (Index i = 0; i < value.size(); ++i) {
      const double original = value.data()[i];
      value.data()[i] = original + h;
      const double plus = loss_fn().item();
      value.data()[i] = original - h;
      const double minus = loss_fn().item();
      value.data()[i] = original;
      numeric.data()[i] = (plus - minus) / (2.0 * h);
    }
  }
  target.set_requires_grad(had_flag);

  const double scale = std::max({analytic.norm(), numeric.norm(), scale_floor});
  GradCheckResult result{std::move(name), 0.0, tolerance, false};
  result.relative_error = (analytic - numeric).norm() / scale;
  result.passed = all_finite(analytic) && all_finite(numeric) && result.relative_error < tolerance;
  return result;
}

}  // namespace grcgan::nn
