#pragma once

#include <functional>

#include "grcgan/gan/config.hpp"
#include "grcgan/nn/network.hpp"
#include "grcgan/nn/tensor.hpp"

namespace grcgan::gan {

using nn::Matrix;

/// G(x, z): raw conditions (m x p) and noise (m x l) to samples (m x q).
using GeneratorFn = std::function<nn::Tensor(const Matrix& conditions, const Matrix& noise)>;
/// D(x, y): raw conditions and samples to an (m x 1) score.
using DiscriminatorFn = std::function<nn::Tensor(const Matrix& conditions, const nn::Tensor& samples)>;

/// SinCos maps each scalar angle column to (sin, cos); Raw is the identity.
Matrix encode_conditions(const Matrix& raw, ConditionEncoding encoding);
std::size_t encoded_dim(std::size_t raw_dim, ConditionEncoding encoding);

/// Feeds concat(z, encode(x)) to `net`. The network must outlive the result.
GeneratorFn network_generator(nn::Network& net, ConditionEncoding encoding, nn::Mode mode);
/// Feeds concat(y, encode(x)) to `net`.
DiscriminatorFn network_discriminator(nn::Network& net, ConditionEncoding encoding);

/// Eval-mode samples without a graph: predict(concat(z, encode(x))).
Matrix predict_samples(const nn::Network& net, ConditionEncoding encoding, const Matrix& conditions,
                       const Matrix& noise);

}  // namespace grcgan::gan
