#include "grcgan/nn/adam.hpp"

#include <cmath>

#include "grcgan/error.hpp"

namespace grcgan::nn {

Adam::Adam(std::vector<Tensor> params, AdamOptions options)
    : params_(std::move(params)), options_(options) {
  if (!(options_.beta1 > 0.0 && options_.beta1 < 1.0 && options_.beta2 > 0.0 && options_.beta2 < 1.0)) {
    throw ConfigError("Adam betas must lie in (0, 1)");
  }
  if (!(options_.learning_rate > 0.0) || !(options_.epsilon > 0.0)) {
    throw ConfigError("Adam learning rate and epsilon must be positive");
  }
  for (const auto& p : params_) {
    state_.first_moment.push_back(Matrix::Zero(p.rows(), p.cols()));
    state_.second_moment.push_back(Matrix::Zero(p.rows(), p.cols()));
  }
}

void Adam::step() {
  for (const auto& p : params_) {
    if (p.has_grad() && !all_finite(p.grad())) {
      throw NonFiniteError("Adam step rejected: non-finite gradient");
    }
  }
  ++state_.step;
  const double t = static_cast<double>(state_.step);
  const double correction1 = 1.0 - std::pow(options_.beta1, t);
  const double correction2 = 1.0 - std::pow(options_.beta2, t);
  for (std::size_t i = 0; i < params_.size(); ++i) {
    auto& p = params_[i];
    auto& m = state_.first_moment[i];
    auto& v = state_.second_moment[i];
    if (p.has_grad()) {
      const Matrix g = p.grad();
      m = options_.beta1 * m + (1.0 - options_.beta1) * g;
      v = options_.beta2 * v + (1.0 - options_.beta2) * g.cwiseAbs2();
    } else {
      m *= options_.beta1;
      v *= options_.beta2;
    }
    const auto m_hat = m.array() / correction1;
    const auto v_hat = v.array() / correction2;
    p.mutable_value().array() -= options_.learning_rate * m_hat / (v_hat.sqrt() + options_.epsilon);
  }
}

void Adam::zero_grad() {
  for (auto& p : params_) p.zero_grad();
}

}  // namespace grcgan::nn
