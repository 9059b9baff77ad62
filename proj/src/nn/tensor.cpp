#include "tbandit/nn/tensor.hpp"

#include <stdexcept>
#include <unordered_set>
#include <utility>

namespace tbandit::nn {
namespace {

thread_local bool g_grad_enabled = true;

std::shared_ptr<detail::Node> make_leaf(std::size_t rows, std::size_t cols, std::vector<double> values,
                                        bool requires_grad) {
  if (values.size() != rows * cols) throw std::invalid_argument("Tensor: value count does not match shape");
  auto node = std::make_shared<detail::Node>();
  node->rows = rows;
  node->cols = cols;
  node->value = std::move(values);
  node->requires_grad = requires_grad;
  return node;
}

// Reverse topological order of the non-frozen subgraph reachable from root.
std::vector<detail::Node*> topo_order(detail::Node* root) {
  std::vector<detail::Node*> order;
  std::unordered_set<detail::Node*> visited;
  std::vector<std::pair<detail::Node*, std::size_t>> stack;
  stack.emplace_back(root, 0);
  visited.insert(root);
  while (!stack.empty()) {
    auto& [node, next] = stack.back();
    if (next < node->parents.size()) {
      detail::Node* parent = node->parents[next++].get();
      if (parent->requires_grad && visited.insert(parent).second) stack.emplace_back(parent, 0);
    } else {
      order.push_back(node);
      stack.pop_back();
    }
  }
  return order;  // parents before children
}

}  // namespace

Tensor Tensor::zeros(std::size_t rows, std::size_t cols, bool requires_grad) {
  return Tensor(make_leaf(rows, cols, std::vector<double>(rows * cols, 0.0), requires_grad));
}

Tensor Tensor::full(std::size_t rows, std::size_t cols, double value, bool requires_grad) {
  return Tensor(make_leaf(rows, cols, std::vector<double>(rows * cols, value), requires_grad));
}

Tensor Tensor::from_values(std::size_t rows, std::size_t cols, std::vector<double> values,
                           bool requires_grad) {
  return Tensor(make_leaf(rows, cols, std::move(values), requires_grad));
}

Tensor Tensor::scalar(double value, bool requires_grad) {
  return Tensor(make_leaf(1, 1, {value}, requires_grad));
}

double Tensor::item() const {
  if (size() != 1) throw std::logic_error("Tensor::item on a non-scalar tensor");
  return node_->value[0];
}

void Tensor::zero_grad() {
  if (!node_->grad.empty()) std::fill(node_->grad.begin(), node_->grad.end(), 0.0);
}

Tensor Tensor::clone() const { return Tensor(make_leaf(rows(), cols(), node_->value, node_->requires_grad)); }

void Tensor::backward(bool retain_graph) const {
  if (size() != 1) throw std::logic_error("backward: loss must be a scalar");
  detail::Node* root = node_.get();
  if (root->freed) throw std::logic_error("backward: graph has already been freed");
  if (!root->requires_grad) throw std::logic_error("backward: loss does not require grad");

  std::vector<detail::Node*> order = topo_order(root);
  for (detail::Node* node : order) {
    if (node->freed) throw std::logic_error("backward: graph has already been freed");
    if (!node->is_leaf) node->grad.assign(node->value.size(), 0.0);
  }
  root->ensure_grad();
  root->grad[0] += 1.0;
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    detail::Node* node = *it;
    if (!node->is_leaf && node->backward) node->backward(*node);
  }
  if (!retain_graph) {
    for (detail::Node* node : order) {
      if (node->is_leaf) continue;
      node->parents.clear();
      node->backward = nullptr;
      node->freed = true;
    }
  }
}

NoGradGuard::NoGradGuard() : previous_(g_grad_enabled) { g_grad_enabled = false; }
NoGradGuard::~NoGradGuard() { g_grad_enabled = previous_; }
bool grad_enabled() { return g_grad_enabled; }

}  // namespace tbandit::nn
