#include <cmath>
#include <stdexcept>
#include <string>

#include "tbandit/nn/tensor.hpp"

namespace tbandit::nn {
namespace {

using detail::Node;
using NodePtr = std::shared_ptr<Node>;

// Builds a result node; the graph edge is recorded only when needed.
Tensor make_result(std::size_t rows, std::size_t cols, std::vector<double> values,
                   std::initializer_list<NodePtr> parents, std::function<void(Node&)> backward) {
  auto node = std::make_shared<Node>();
  node->rows = rows;
  node->cols = cols;
  node->value = std::move(values);
  node->is_leaf = false;
  bool needs = false;
  if (grad_enabled()) {
    for (const NodePtr& p : parents) needs = needs || p->requires_grad;
  }
  if (needs) {
    node->requires_grad = true;
    node->parents.assign(parents.begin(), parents.end());
    node->backward = std::move(backward);
  } else {
    node->is_leaf = true;
  }
  return Tensor(std::move(node));
}

void require_same_shape(const Tensor& a, const Tensor& b, const char* op) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw std::invalid_argument(std::string(op) + ": shape mismatch (" + std::to_string(a.rows()) + "x" +
                                std::to_string(a.cols()) + " vs " + std::to_string(b.rows()) + "x" +
                                std::to_string(b.cols()) + ")");
  }
}

template <typename Forward, typename Derivative>
Tensor unary(const Tensor& a, Forward f, Derivative df) {
  const auto& in = a.node()->value;
  std::vector<double> out(in.size());
  for (std::size_t i = 0; i < in.size(); ++i) out[i] = f(in[i]);
  return make_result(a.rows(), a.cols(), std::move(out), {a.node()}, [df](Node& self) {
    Node& p = *self.parents[0];
    p.ensure_grad();
    for (std::size_t i = 0; i < self.grad.size(); ++i) p.grad[i] += self.grad[i] * df(p.value[i], self.value[i]);
  });
}

// a +/- b with optional row broadcast of b.
Tensor add_impl(const Tensor& a, const Tensor& b, double sign) {
  const bool broadcast = b.rows() == 1 && a.rows() != 1 && b.cols() == a.cols();
  if (!broadcast) require_same_shape(a, b, sign > 0 ? "add" : "sub");
  const std::size_t rows = a.rows(), cols = a.cols();
  const auto& av = a.node()->value;
  const auto& bv = b.node()->value;
  std::vector<double> out(av.size());
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      out[r * cols + c] = av[r * cols + c] + sign * bv[broadcast ? c : r * cols + c];
    }
  }
  return make_result(rows, cols, std::move(out), {a.node(), b.node()}, [broadcast, sign, cols](Node& self) {
    Node& pa = *self.parents[0];
    Node& pb = *self.parents[1];
    if (pa.requires_grad) {
      pa.ensure_grad();
      for (std::size_t i = 0; i < self.grad.size(); ++i) pa.grad[i] += self.grad[i];
    }
    if (pb.requires_grad) {
      pb.ensure_grad();
      for (std::size_t i = 0; i < self.grad.size(); ++i) pb.grad[broadcast ? i % cols : i] += sign * self.grad[i];
    }
  });
}

}  // namespace

Tensor matmul(const Tensor& a, const Tensor& b) {
  if (a.cols() != b.rows()) {
    throw std::invalid_argument("matmul: inner dimensions differ (" + std::to_string(a.cols()) + " vs " +
                                std::to_string(b.rows()) + ")");
  }
  const std::size_t n = a.rows(), k = a.cols(), m = b.cols();
  const auto& av = a.node()->value;
  const auto& bv = b.node()->value;
  std::vector<double> out(n * m, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t p = 0; p < k; ++p) {
      const double aip = av[i * k + p];
      const double* brow = &bv[p * m];
      double* orow = &out[i * m];
      for (std::size_t j = 0; j < m; ++j) orow[j] += aip * brow[j];
    }
  }
  return make_result(n, m, std::move(out), {a.node(), b.node()}, [n, k, m](Node& self) {
    Node& pa = *self.parents[0];
    Node& pb = *self.parents[1];
    const auto& g = self.grad;
    if (pa.requires_grad) {
      pa.ensure_grad();
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t p = 0; p < k; ++p) {
          double acc = 0.0;
          for (std::size_t j = 0; j < m; ++j) acc += g[i * m + j] * pb.value[p * m + j];
          pa.grad[i * k + p] += acc;
        }
      }
    }
    if (pb.requires_grad) {
      pb.ensure_grad();
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t p = 0; p < k; ++p) {
          const double aip = pa.value[i * k + p];
          for (std::size_t j = 0; j < m; ++j) pb.grad[p * m + j] += aip * g[i * m + j];
        }
      }
    }
  });
}

Tensor operator+(const Tensor& a, const Tensor& b) { return add_impl(a, b, 1.0); }
Tensor operator-(const Tensor& a, const Tensor& b) { return add_impl(a, b, -1.0); }

Tensor operator*(const Tensor& a, const Tensor& b) {
  require_same_shape(a, b, "mul");
  const auto& av = a.node()->value;
  const auto& bv = b.node()->value;
  std::vector<double> out(av.size());
  for (std::size_t i = 0; i < av.size(); ++i) out[i] = av[i] * bv[i];
  return make_result(a.rows(), a.cols(), std::move(out), {a.node(), b.node()}, [](Node& self) {
    Node& pa = *self.parents[0];
    Node& pb = *self.parents[1];
    if (pa.requires_grad) {
      pa.ensure_grad();
      for (std::size_t i = 0; i < self.grad.size(); ++i) pa.grad[i] += self.grad[i] * pb.value[i];
    }
    if (pb.requires_grad) {
      pb.ensure_grad();
      for (std::size_t i = 0; i < self.grad.size(); ++i) pb.grad[i] += self.grad[i] * pa.value[i];
    }
  });
}

Tensor operator*(const Tensor& a, double s) {
  return unary(a, [s](double x) { return s * x; }, [s](double, double) { return s; });
}
Tensor operator*(double s, const Tensor& a) { return a * s; }
Tensor operator+(const Tensor& a, double s) {
  return unary(a, [s](double x) { return x + s; }, [](double, double) { return 1.0; });
}
Tensor operator-(const Tensor& a) { return a * -1.0; }

Tensor relu(const Tensor& a) {
  return unary(a, [](double x) { return x > 0.0 ? x : 0.0; }, [](double x, double) { return x > 0.0 ? 1.0 : 0.0; });
}

Tensor elu(const Tensor& a) {
  return unary(
      a, [](double x) { return x > 0.0 ? x : std::expm1(x); },
      [](double x, double y) { return x > 0.0 ? 1.0 : y + 1.0; });
}

Tensor tanh(const Tensor& a) {
  return unary(a, [](double x) { return std::tanh(x); }, [](double, double y) { return 1.0 - y * y; });
}

Tensor exp(const Tensor& a) {
  return unary(a, [](double x) { return std::exp(x); }, [](double, double y) { return y; });
}

Tensor square(const Tensor& a) {
  return unary(a, [](double x) { return x * x; }, [](double x, double) { return 2.0 * x; });
}

Tensor clamp(const Tensor& a, double lo, double hi) {
  if (lo > hi) throw std::invalid_argument("clamp: lo > hi");
  return unary(
      a, [lo, hi](double x) { return x < lo ? lo : (x > hi ? hi : x); },
      [lo, hi](double x, double) { return (x >= lo && x <= hi) ? 1.0 : 0.0; });
}

Tensor sum(const Tensor& a) {
  double total = 0.0;
  for (double v : a.values()) total += v;
  return make_result(1, 1, {total}, {a.node()}, [](Node& self) {
    Node& p = *self.parents[0];
    p.ensure_grad();
    for (double& g : p.grad) g += self.grad[0];
  });
}

Tensor mean(const Tensor& a) {
  if (a.size() == 0) throw std::invalid_argument("mean: empty tensor");
  return sum(a) * (1.0 / static_cast<double>(a.size()));
}

Tensor slice_cols(const Tensor& a, std::size_t begin, std::size_t count) {
  if (begin + count > a.cols()) throw std::invalid_argument("slice_cols: range out of bounds");
  const std::size_t rows = a.rows(), cols = a.cols();
  const auto& av = a.node()->value;
  std::vector<double> out(rows * count);
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < count; ++c) out[r * count + c] = av[r * cols + begin + c];
  }
  return make_result(rows, count, std::move(out), {a.node()}, [rows, cols, begin, count](Node& self) {
    Node& p = *self.parents[0];
    p.ensure_grad();
    for (std::size_t r = 0; r < rows; ++r) {
      for (std::size_t c = 0; c < count; ++c) p.grad[r * cols + begin + c] += self.grad[r * count + c];
    }
  });
}

Tensor gather_rows(const Tensor& a, std::span<const std::size_t> rows) {
  const std::size_t cols = a.cols();
  const auto& av = a.node()->value;
  std::vector<double> out(rows.size() * cols);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i] >= a.rows()) throw std::out_of_range("gather_rows: row index out of range");
    for (std::size_t c = 0; c < cols; ++c) out[i * cols + c] = av[rows[i] * cols + c];
  }
  std::vector<std::size_t> index(rows.begin(), rows.end());
  return make_result(rows.size(), cols, std::move(out), {a.node()}, [index = std::move(index), cols](Node& self) {
    Node& p = *self.parents[0];
    p.ensure_grad();
    for (std::size_t i = 0; i < index.size(); ++i) {
      for (std::size_t c = 0; c < cols; ++c) p.grad[index[i] * cols + c] += self.grad[i * cols + c];
    }
  });
}

}  // namespace tbandit::nn
