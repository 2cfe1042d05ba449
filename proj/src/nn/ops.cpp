#include "grcgan/nn/ops.hpp"

#include <cmath>
#include <string>

#include "grcgan/error.hpp"

namespace grcgan::nn {

namespace {

std::string shape_of(const Tensor& t) {
  return "(" + std::to_string(t.rows()) + "," + std::to_string(t.cols()) + ")";
}

void require_same_shape(const Tensor& a, const Tensor& b, const char* op) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw ShapeError(std::string(op) + ": shape mismatch " + shape_of(a) + " vs " + shape_of(b));
  }
}

}  // namespace

Tensor matmul(const Tensor& a, const Tensor& b) {
  if (a.cols() != b.rows()) {
    throw ShapeError("matmul: inner dimensions differ " + shape_of(a) + " x " + shape_of(b));
  }
  Matrix out = a.value() * b.value();
  return Tensor::from_op(std::move(out), {a, b}, [a, b](const Matrix& g) {
    if (a.requires_grad()) a.accumulate_grad(g * b.value().transpose());
    if (b.requires_grad()) b.accumulate_grad(a.value().transpose() * g);
  });
}

Tensor linear(const Tensor& x, const Tensor& weight, const Tensor& bias) {
  if (x.cols() != weight.rows()) {
    throw ShapeError("linear: input " + shape_of(x) + " does not match weight " + shape_of(weight));
  }
  if (bias.rows() != 1 || bias.cols() != weight.cols()) {
    throw ShapeError("linear: bias " + shape_of(bias) + " does not match weight " + shape_of(weight));
  }
  Matrix out(x.rows(), weight.cols());
  out.noalias() = x.value() * weight.value();
  out.rowwise() += bias.value().row(0);
  return Tensor::from_op(std::move(out), {x, weight, bias}, [x, weight, bias](const Matrix& g) {
    if (x.requires_grad()) {
      Matrix gx(g.rows(), weight.rows());
      gx.noalias() = g * weight.value().transpose();
      x.accumulate_grad(gx);
    }
    if (weight.requires_grad()) {
      Matrix gw(weight.rows(), weight.cols());
      gw.noalias() = x.value().transpose() * g;
      weight.accumulate_grad(gw);
    }
    if (bias.requires_grad()) bias.accumulate_grad(g.colwise().sum());
  });
}

Tensor add(const Tensor& a, const Tensor& b) {
  require_same_shape(a, b, "add");
  return Tensor::from_op(a.value() + b.value(), {a, b}, [a, b](const Matrix& g) {
    a.accumulate_grad(g);
    b.accumulate_grad(g);
  });
}

Tensor sub(const Tensor& a, const Tensor& b) {
  require_same_shape(a, b, "sub");
  return Tensor::from_op(a.value() - b.value(), {a, b}, [a, b](const Matrix& g) {
    a.accumulate_grad(g);
    if (b.requires_grad()) b.accumulate_grad(-g);
  });
}

Tensor mul(const Tensor& a, const Tensor& b) {
  require_same_shape(a, b, "mul");
  Matrix out = a.value().cwiseProduct(b.value());
  return Tensor::from_op(std::move(out), {a, b}, [a, b](const Matrix& g) {
    if (a.requires_grad()) a.accumulate_grad(g.cwiseProduct(b.value()));
    if (b.requires_grad()) b.accumulate_grad(g.cwiseProduct(a.value()));
  });
}

Tensor add_row(const Tensor& a, const Tensor& row) {
  if (row.rows() != 1 || row.cols() != a.cols()) {
    throw ShapeError("add_row: row " + shape_of(row) + " does not broadcast over " + shape_of(a));
  }
  Matrix out = a.value();
  out.rowwise() += row.value().row(0);
  return Tensor::from_op(std::move(out), {a, row}, [a, row](const Matrix& g) {
    a.accumulate_grad(g);
    if (row.requires_grad()) row.accumulate_grad(g.colwise().sum());
  });
}

Tensor scale(const Tensor& a, double factor) {
  return Tensor::from_op(a.value() * factor, {a},
                         [a, factor](const Matrix& g) { a.accumulate_grad(g * factor); });
}

Tensor add_scalar(const Tensor& a, double value) {
  Matrix out = a.value().array() + value;
  return Tensor::from_op(std::move(out), {a}, [a](const Matrix& g) { a.accumulate_grad(g); });
}

Tensor relu(const Tensor& a) {
  Matrix out = a.value().cwiseMax(0.0);
  return Tensor::from_op(std::move(out), {a}, [a](const Matrix& g) {
    a.accumulate_grad((a.value().array() > 0.0).select(g, 0.0));
  });
}

Tensor leaky_relu(const Tensor& a, double slope) {
  Matrix out = (a.value().array() > 0.0).select(a.value(), slope * a.value());
  return Tensor::from_op(std::move(out), {a}, [a, slope](const Matrix& g) {
    a.accumulate_grad((a.value().array() > 0.0).select(g, slope * g));
  });
}

Tensor sigmoid(const Tensor& a) {
  Matrix out = (1.0 + (-a.value().array()).exp()).inverse().matrix();
  Matrix s = out;
  return Tensor::from_op(std::move(out), {a}, [a, s](const Matrix& g) {
    a.accumulate_grad((g.array() * s.array() * (1.0 - s.array())).matrix());
  });
}

Tensor square(const Tensor& a) {
  Matrix out = a.value().array().square().matrix();
  return Tensor::from_op(std::move(out), {a}, [a](const Matrix& g) {
    a.accumulate_grad((2.0 * g.array() * a.value().array()).matrix());
  });
}

Tensor log_clamped(const Tensor& a, double lo, double hi) {
  Matrix clamped = a.value().cwiseMax(lo).cwiseMin(hi);
  Matrix out = clamped.array().log().matrix();
  return Tensor::from_op(std::move(out), {a}, [a, lo, hi](const Matrix& g) {
    const auto& v = a.value().array();
    a.accumulate_grad(((v >= lo) && (v <= hi)).select(g.array() / v, 0.0).matrix());
  });
}

Tensor clamp_max(const Tensor& a, double hi) {
  Matrix out = a.value().cwiseMin(hi);
  return Tensor::from_op(std::move(out), {a}, [a, hi](const Matrix& g) {
    a.accumulate_grad((a.value().array() <= hi).select(g, 0.0));
  });
}

Tensor row_norm(const Tensor& a) {
  Matrix norms = a.value().rowwise().norm();
  Matrix n = norms;
  return Tensor::from_op(std::move(norms), {a}, [a, n](const Matrix& g) {
    Matrix ga(a.rows(), a.cols());
    for (Index i = 0; i < a.rows(); ++i) {
      const double norm = n(i, 0);
      if (norm > 0.0) {
        ga.row(i) = a.value().row(i) * (g(i, 0) / norm);
      } else {
        ga.row(i).setZero();
      }
    }
    a.accumulate_grad(ga);
  });
}

Tensor sum(const Tensor& a) {
  Matrix out(1, 1);
  out(0, 0) = a.value().sum();
  return Tensor::from_op(std::move(out), {a}, [a](const Matrix& g) {
    a.accumulate_grad(Matrix::Constant(a.rows(), a.cols(), g(0, 0)));
  });
}

Tensor mean(const Tensor& a) {
  if (a.value().size() == 0) throw ShapeError("mean of an empty tensor");
  const double n = static_cast<double>(a.value().size());
  Matrix out(1, 1);
  out(0, 0) = a.value().sum() / n;
  return Tensor::from_op(std::move(out), {a}, [a, n](const Matrix& g) {
    a.accumulate_grad(Matrix::Constant(a.rows(), a.cols(), g(0, 0) / n));
  });
}

Tensor concat_cols(const std::vector<Tensor>& parts) {
  if (parts.empty()) throw ShapeError("concat_cols of nothing");
  const Index rows = parts.front().rows();
  Index cols = 0;
  for (const auto& p : parts) {
    if (p.rows() != rows) throw ShapeError("concat_cols: row counts differ");
    cols += p.cols();
  }
  Matrix out(rows, cols);
  Index offset = 0;
  for (const auto& p : parts) {
    out.middleCols(offset, p.cols()) = p.value();
    offset += p.cols();
  }
  return Tensor::from_op(std::move(out), parts, [parts](const Matrix& g) {
    Index off = 0;
    for (const auto& p : parts) {
      if (p.requires_grad()) p.accumulate_grad(g.middleCols(off, p.cols()));
      off += p.cols();
    }
  });
}

Tensor slice_rows(const Tensor& a, Index start, Index count) {
  if (start < 0 || count < 0 || start + count > a.rows()) throw ShapeError("slice_rows out of range");
  Matrix out = a.value().middleRows(start, count);
  return Tensor::from_op(std::move(out), {a}, [a, start, count](const Matrix& g) {
    Matrix full = Matrix::Zero(a.rows(), a.cols());
    full.middleRows(start, count) = g;
    a.accumulate_grad(full);
  });
}

Tensor batch_norm_train(const Tensor& x, const Tensor& gamma, const Tensor& beta, double eps,
                        Eigen::RowVectorXd* batch_mean, Eigen::RowVectorXd* batch_var) {
  const Index n = x.rows();
  if (n < 2) throw ShapeError("batch_norm_train needs at least two rows");
  if (gamma.rows() != 1 || gamma.cols() != x.cols() || beta.rows() != 1 || beta.cols() != x.cols()) {
    throw ShapeError("batch_norm_train: affine parameters do not match features");
  }
  const Eigen::RowVectorXd mu = x.value().colwise().mean();
  Matrix centered = x.value().rowwise() - mu;
  const Eigen::RowVectorXd var = centered.array().square().colwise().sum() / static_cast<double>(n);
  const Eigen::RowVectorXd inv_std = (var.array() + eps).rsqrt();
  Matrix xhat = centered.array().rowwise() * inv_std.array();
  Matrix out = xhat.array().rowwise() * gamma.value().row(0).array();
  out.rowwise() += beta.value().row(0);
  if (batch_mean != nullptr) *batch_mean = mu;
  if (batch_var != nullptr) *batch_var = var;

  return Tensor::from_op(
      std::move(out), {x, gamma, beta}, [x, gamma, beta, xhat, inv_std, n](const Matrix& g) {
        if (gamma.requires_grad()) gamma.accumulate_grad(g.cwiseProduct(xhat).colwise().sum());
        if (beta.requires_grad()) beta.accumulate_grad(g.colwise().sum());
        if (x.requires_grad()) {
          const Matrix dxhat = g.array().rowwise() * gamma.value().row(0).array();
          const Eigen::RowVectorXd sum_d = dxhat.colwise().sum();
          const Eigen::RowVectorXd sum_dx = dxhat.cwiseProduct(xhat).colwise().sum();
          const double inv_n = 1.0 / static_cast<double>(n);
          Matrix dx = (static_cast<double>(n) * dxhat.array()).matrix();
          dx.rowwise() -= sum_d;
          dx -= (xhat.array().rowwise() * sum_dx.array()).matrix();
          dx = (dx.array().rowwise() * (inv_std.array() * inv_n)).matrix();
          x.accumulate_grad(dx);
        }
      });
}

Tensor batch_norm_eval(const Tensor& x, const Tensor& gamma, const Tensor& beta,
                       const Eigen::RowVectorXd& running_mean,
                       const Eigen::RowVectorXd& running_var, double eps) {
  if (running_mean.size() != x.cols() || running_var.size() != x.cols() ||
      gamma.cols() != x.cols() || beta.cols() != x.cols()) {
    throw ShapeError("batch_norm_eval: statistics do not match features");
  }
  const Eigen::RowVectorXd inv_std = (running_var.array() + eps).rsqrt();
  Matrix xhat = (x.value().rowwise() - running_mean).array().rowwise() * inv_std.array();
  Matrix out = xhat.array().rowwise() * gamma.value().row(0).array();
  out.rowwise() += beta.value().row(0);
  return Tensor::from_op(std::move(out), {x, gamma, beta},
                         [x, gamma, beta, xhat, inv_std](const Matrix& g) {
                           if (gamma.requires_grad()) {
                             gamma.accumulate_grad(g.cwiseProduct(xhat).colwise().sum());
                           }
                           if (beta.requires_grad()) beta.accumulate_grad(g.colwise().sum());
                           if (x.requires_grad()) {
                             Matrix dx = g.array().rowwise() *
                                         (gamma.value().row(0).array() * inv_std.array());
                             x.accumulate_grad(dx);
                           }
                         });
}

}  // namespace grcgan::nn
