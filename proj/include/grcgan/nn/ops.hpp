#pragma once

#include <vector>

#include "grcgan/nn/tensor.hpp"

namespace grcgan::nn {

// Differentiable primitives. Shapes are checked eagerly and violations raise
// ShapeError. Broadcasting is limited to a single row added to every row.

Tensor matmul(const Tensor& a, const Tensor& b);
/// x * W + b, with W shaped (in, out) and b shaped (1, out).
Tensor linear(const Tensor& x, const Tensor& weight, const Tensor& bias);

Tensor add(const Tensor& a, const Tensor& b);
Tensor sub(const Tensor& a, const Tensor& b);
Tensor mul(const Tensor& a, const Tensor& b);
Tensor add_row(const Tensor& a, const Tensor& row);
Tensor scale(const Tensor& a, double factor);
Tensor add_scalar(const Tensor& a, double value);

Tensor relu(const Tensor& a);
Tensor leaky_relu(const Tensor& a, double slope);
Tensor sigmoid(const Tensor& a);
Tensor square(const Tensor& a);
/// Entrywise log after clamping into [lo, hi]; zero gradient where clamped.
Tensor log_clamped(const Tensor& a, double lo, double hi);
/// Entrywise min(a, hi); zero gradient where the cap is active.
Tensor clamp_max(const Tensor& a, double hi);

/// Euclidean norm of each row, shape (rows, 1). The gradient at a zero row
/// is taken to be zero.
Tensor row_norm(const Tensor& a);
Tensor sum(const Tensor& a);
Tensor mean(const Tensor& a);

Tensor concat_cols(const std::vector<Tensor>& parts);
Tensor slice_rows(const Tensor& a, Index start, Index count);

/// Training-mode batch normalization over rows with biased batch variance.
/// Batch statistics are written to `batch_mean` / `batch_var` when non-null.
Tensor batch_norm_train(const Tensor& x, const Tensor& gamma, const Tensor& beta, double eps,
                        Eigen::RowVectorXd* batch_mean, Eigen::RowVectorXd* batch_var);
/// Inference-mode batch normalization: a fixed per-column affine map.
Tensor batch_norm_eval(const Tensor& x, const Tensor& gamma, const Tensor& beta,
                       const Eigen::RowVectorXd& running_mean,
                       const Eigen::RowVectorXd& running_var, double eps);

}  // namespace grcgan::nn
