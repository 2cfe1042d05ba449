#include "grcgan/nn/tensor.hpp"

#include <unordered_set>

#include "grcgan/error.hpp"

namespace grcgan::nn {

namespace detail {
struct Node {
  Matrix value;
  Matrix grad;
  bool requires_grad = false;
  bool released = false;
  std::vector<std::shared_ptr<Node>> parents;
  Tensor::BackwardFn backward;
};
}  // namespace detail

namespace {
thread_local bool g_grad_enabled = true;
}

bool grad_enabled() { return g_grad_enabled; }

NoGradGuard::NoGradGuard() : previous_(g_grad_enabled) { g_grad_enabled = false; }
NoGradGuard::~NoGradGuard() { g_grad_enabled = previous_; }

bool all_finite(const Matrix& m) { return m.allFinite(); }

Tensor::Tensor() : node_(std::make_shared<detail::Node>()) {}

Tensor::Tensor(std::shared_ptr<detail::Node> node) : node_(std::move(node)) {}

Tensor Tensor::constant(Matrix value) {
  auto node = std::make_shared<detail::Node>();
  node->value = std::move(value);
  return Tensor(std::move(node));
}

Tensor Tensor::parameter(Matrix value) {
  auto node = std::make_shared<detail::Node>();
  node->value = std::move(value);
  node->requires_grad = true;
  return Tensor(std::move(node));
}

Tensor Tensor::from_op(Matrix value, std::vector<Tensor> parents, BackwardFn backward) {
  auto node = std::make_shared<detail::Node>();
  node->value = std::move(value);
  if (!g_grad_enabled) return Tensor(std::move(node));
  bool any = false;
  for (const auto& p : parents) any = any || p.requires_grad();
  if (!any) return Tensor(std::move(node));
  node->requires_grad = true;
  node->parents.reserve(parents.size());
  for (const auto& p : parents) node->parents.push_back(p.node_);
  node->backward = std::move(backward);
  return Tensor(std::move(node));
}

Index Tensor::rows() const { return node_->value.rows(); }
Index Tensor::cols() const { return node_->value.cols(); }
const Matrix& Tensor::value() const { return node_->value; }
Matrix& Tensor::mutable_value() { return node_->value; }

double Tensor::item() const {
  if (rows() != 1 || cols() != 1) throw ShapeError("item() requires a 1x1 tensor");
  return node_->value(0, 0);
}

bool Tensor::requires_grad() const { return node_->requires_grad; }
void Tensor::set_requires_grad(bool flag) { node_->requires_grad = flag; }
bool Tensor::has_grad() const { return node_->grad.size() != 0; }

Matrix Tensor::grad() const {
  if (has_grad()) return node_->grad;
  return Matrix::Zero(rows(), cols());
}

void Tensor::zero_grad() { node_->grad.resize(0, 0); }

void Tensor::accumulate_grad(const Matrix& g) const {
  if (!node_->requires_grad) return;
  if (g.rows() != rows() || g.cols() != cols()) throw ShapeError("gradient shape mismatch");
  if (node_->grad.size() == 0) {
    node_->grad = g;
  } else {
    node_->grad += g;
  }
}

void Tensor::backward() const {
  if (rows() != 1 || cols() != 1) throw GraphError("backward() requires a scalar loss");
  if (node_->released) throw GraphError("graph already freed by a previous backward()");
  if (!node_->requires_grad) return;

  // Iterative post-order DFS gives a topological order. Owning pointers keep
  // every node alive while its children release their parent links.
  std::vector<std::shared_ptr<detail::Node>> order;
  std::unordered_set<detail::Node*> visited;
  std::vector<std::pair<std::shared_ptr<detail::Node>, std::size_t>> stack;
  stack.emplace_back(node_, 0);
  visited.insert(node_.get());
  while (!stack.empty()) {
    auto& top = stack.back();
    if (top.second < top.first->parents.size()) {
      std::shared_ptr<detail::Node> p = top.first->parents[top.second++];
      if (p->released) throw GraphError("graph already freed by a previous backward()");
      if (p->requires_grad && visited.insert(p.get()).second) stack.emplace_back(std::move(p), 0);
    } else {
      order.push_back(std::move(top.first));
      stack.pop_back();
    }
  }

  Tensor(node_).accumulate_grad(Matrix::Ones(1, 1));
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    detail::Node* n = it->get();
    if (!n->backward) continue;
    if (n->grad.size() != 0) n->backward(n->grad);
    n->backward = nullptr;
    n->parents.clear();
    n->grad.resize(0, 0);
    n->released = true;
  }
}

Tensor Tensor::detach() const { return Tensor::constant(node_->value); }

}  // namespace grcgan::nn
