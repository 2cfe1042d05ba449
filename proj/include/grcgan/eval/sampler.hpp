#pragma once

#include <cstddef>
#include <functional>

#include "grcgan/gan/config.hpp"
#include "grcgan/nn/network.hpp"
#include "grcgan/random.hpp"

namespace grcgan::eval {

/// A conditional generator seen from outside: raw conditions (m x p) and
/// explicit noise (m x noise_dim) to samples. Evaluation code draws the noise
/// so that two conditions can share the same z.
struct Sampler {
  std::size_t noise_dim = 0;
  std::function<RowMatrix(const RowMatrix& conditions, const RowMatrix& noise)> map;

  RowMatrix operator()(const RowMatrix& conditions, const RowMatrix& noise) const { return map(conditions, noise); }
  /// `count` draws at a single condition row.
  RowMatrix draw(const Eigen::RowVectorXd& condition, std::size_t count, Rng& rng) const;
};

/// Eval-mode view of a trained generator. The network must outlive the sampler.
Sampler network_sampler(const nn::Network& generator, gan::ConditionEncoding encoding, std::size_t noise_dim);

}  // namespace grcgan::eval
