#pragma once

#include <functional>
#include <memory>
#include <vector>

#include <Eigen/Core>

namespace grcgan::nn {

using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Index = Eigen::Index;

namespace detail {
struct Node;
}

/// Dense rank-2 real array that participates in reverse-mode autodiff.
///
/// A Tensor is a cheap handle; copies share the same value and gradient.
/// Leaves are either constants or parameters (requires_grad). Every op over
/// tensors that require gradients records a node with a backward closure, so
/// the graph is built dynamically by ordinary forward code. Calling
/// `backward()` on a 1x1 result propagates gradients into all reachable
/// leaves and then releases the interior of the graph.
class Tensor {
 public:
  using BackwardFn = std::function<void(const Matrix& grad_out)>;

  Tensor();

  static Tensor constant(Matrix value);
  static Tensor parameter(Matrix value);

  /// Records a custom op. `backward` receives the gradient of the loss with
  /// respect to this op's value and must route it into `parents` through
  /// `accumulate_grad`. When grad mode is off, or no parent requires a
  /// gradient, the result is a plain constant and `backward` is dropped.
  static Tensor from_op(Matrix value, std::vector<Tensor> parents, BackwardFn backward);

  Index rows() const;
  Index cols() const;
  const Matrix& value() const;
  /// Direct access for optimizers and checkpoint loading.
  Matrix& mutable_value();
  double item() const;

  bool requires_grad() const;
  void set_requires_grad(bool flag);
  bool has_grad() const;
  /// Accumulated gradient; zeros of the right shape when nothing has flowed.
  Matrix grad() const;
  void zero_grad();
  void accumulate_grad(const Matrix& g) const;

  /// Backpropagates from a scalar. Throws GraphError for a non-scalar or an
  /// already released graph.
  void backward() const;

  /// A constant holding the same value, cut off from the graph.
  Tensor detach() const;

  bool same_node(const Tensor& other) const { return node_ == other.node_; }

 private:
  explicit Tensor(std::shared_ptr<detail::Node> node);
  std::shared_ptr<detail::Node> node_;
};

bool grad_enabled();

/// Disables graph recording for its lifetime (thread local).
class NoGradGuard {
 public:
  NoGradGuard();
  ~NoGradGuard();
  NoGradGuard(const NoGradGuard&) = delete;
  NoGradGuard& operator=(const NoGradGuard&) = delete;

 private:
  bool previous_;
};

bool all_finite(const Matrix& m);

}  // namespace grcgan::nn
