#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <span>
#include <vector>

namespace tbandit::nn {

namespace detail {

struct Node {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> value;
  std::vector<double> grad;  // lazily allocated
  bool requires_grad = false;
  bool is_leaf = true;
  bool freed = false;
  std::vector<std::shared_ptr<Node>> parents;
  std::function<void(Node&)> backward;

  void ensure_grad() {
    if (grad.size() != value.size()) grad.assign(value.size(), 0.0);
  }
};

}  // namespace detail

/// Row-major 2-D tensor handle (scalars are 1x1). Copies share the node;
/// use clone() for an independent leaf. Operations on tensors that require
/// gradients record a define-by-run graph unless a NoGradGuard is active.
class Tensor {
 public:
  Tensor() = default;

  static Tensor zeros(std::size_t rows, std::size_t cols, bool requires_grad = false);
  static Tensor full(std::size_t rows, std::size_t cols, double value, bool requires_grad = false);
  static Tensor from_values(std::size_t rows, std::size_t cols, std::vector<double> values,
                            bool requires_grad = false);
  static Tensor scalar(double value, bool requires_grad = false);

  bool defined() const { return node_ != nullptr; }
  std::size_t rows() const { return node_->rows; }
  std::size_t cols() const { return node_->cols; }
  std::size_t size() const { return node_->value.size(); }
  std::vector<std::size_t> shape() const { return {rows(), cols()}; }

  std::span<const double> values() const { return node_->value; }
  std::span<double> mutable_values() { return node_->value; }
  std::span<const double> grad() const { return node_->grad; }
  std::span<double> mutable_grad() {
    node_->ensure_grad();
    return node_->grad;
  }
  bool has_grad() const { return node_->grad.size() == node_->value.size(); }
  double item() const;
  double at(std::size_t r, std::size_t c) const { return node_->value[r * cols() + c]; }

  bool requires_grad() const { return node_->requires_grad; }
  bool is_leaf() const { return node_->is_leaf; }
  void zero_grad();

  /// Reverse-mode accumulation from this scalar. Leaf gradients accumulate
  /// across calls; without retain_graph the recorded graph is released and a
  /// second backward through it throws std::logic_error.
  void backward(bool retain_graph = false) const;

  /// Independent leaf with copied values and the same requires_grad flag.
  Tensor clone() const;

  explicit Tensor(std::shared_ptr<detail::Node> node) : node_(std::move(node)) {}
  const std::shared_ptr<detail::Node>& node() const { return node_; }

 private:
  std::shared_ptr<detail::Node> node_;
};

/// Disables graph recording on the current thread for its lifetime.
class NoGradGuard {
 public:
  NoGradGuard();
  ~NoGradGuard();
  NoGradGuard(const NoGradGuard&) = delete;
  NoGradGuard& operator=(const NoGradGuard&) = delete;

 private:
  bool previous_;
};

bool grad_enabled();

// Elementwise and linear-algebra operations.
Tensor matmul(const Tensor& a, const Tensor& b);
/// a + b where b has a's shape or is a 1 x cols row broadcast over rows.
Tensor operator+(const Tensor& a, const Tensor& b);
Tensor operator-(const Tensor& a, const Tensor& b);
Tensor operator*(const Tensor& a, const Tensor& b);
Tensor operator*(const Tensor& a, double s);
Tensor operator*(double s, const Tensor& a);
Tensor operator+(const Tensor& a, double s);
Tensor operator-(const Tensor& a);
Tensor relu(const Tensor& a);
Tensor elu(const Tensor& a);
Tensor tanh(const Tensor& a);
Tensor exp(const Tensor& a);
Tensor square(const Tensor& a);
/// Hard clamp; the gradient is zero outside [lo, hi].
Tensor clamp(const Tensor& a, double lo, double hi);
Tensor sum(const Tensor& a);
Tensor mean(const Tensor& a);
Tensor slice_cols(const Tensor& a, std::size_t begin, std::size_t count);
/// Selects rows by index; the backward pass scatter-adds.
Tensor gather_rows(const Tensor& a, std::span<const std::size_t> rows);

}  // namespace tbandit::nn
