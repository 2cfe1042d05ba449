#include "grcgan/gan/networks.hpp"

#include "grcgan/error.hpp"
#include "grcgan/nn/ops.hpp"

namespace grcgan::gan {

Matrix encode_conditions(const Matrix& raw, ConditionEncoding encoding) {
  if (encoding == ConditionEncoding::raw) return raw;
  Matrix out(raw.rows(), 2 * raw.cols());
  for (Eigen::Index j = 0; j < raw.cols(); ++j) {
    out.col(2 * j) = raw.col(j).array().sin();
    out.col(2 * j + 1) = raw.col(j).array().cos();
  }
  return out;
}

std::size_t encoded_dim(std::size_t raw_dim, ConditionEncoding encoding) {
  return encoding == ConditionEncoding::sin_cos ? 2 * raw_dim : raw_dim;
}

namespace {

Matrix join(const Matrix& left, const Matrix& right) {
  if (left.rows() != right.rows()) throw ShapeError("condition and noise/sample row counts differ");
  Matrix out(left.rows(), left.cols() + right.cols());
  out << left, right;
  return out;
}

}  // namespace

GeneratorFn network_generator(nn::Network& net, ConditionEncoding encoding, nn::Mode mode) {
  return [&net, encoding, mode](const Matrix& conditions, const Matrix& noise) {
    return net.forward(nn::Tensor::constant(join(noise, encode_conditions(conditions, encoding))), mode);
  };
}

DiscriminatorFn network_discriminator(nn::Network& net, ConditionEncoding encoding) {
  return [&net, encoding](const Matrix& conditions, const nn::Tensor& samples) {
    if (conditions.rows() != samples.rows()) throw ShapeError("condition and sample row counts differ");
    auto input = nn::concat_cols({samples, nn::Tensor::constant(encode_conditions(conditions, encoding))});
    return net.forward(input, nn::Mode::train);
  };
}

Matrix predict_samples(const nn::Network& net, ConditionEncoding encoding, const Matrix& conditions,
                       const Matrix& noise) {
  return net.predict(join(noise, encode_conditions(conditions, encoding)));
}

}  // namespace grcgan::gan
