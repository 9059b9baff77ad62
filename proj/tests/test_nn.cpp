#include <doctest.h>

#include <cmath>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "tbandit/core/error.hpp"
#include "tbandit/nn/adam.hpp"
#include "tbandit/nn/checkpoint.hpp"
#include "tbandit/nn/gradcheck.hpp"
#include "tbandit/nn/losses.hpp"
#include "tbandit/nn/mlp.hpp"
#include "tbandit/nn/tensor.hpp"

using namespace tbandit;
using namespace tbandit::nn;

namespace {

Tensor random_input(std::size_t rows, std::size_t cols, Rng& rng) {
  std::vector<double> v(rows * cols);
  for (double& x : v) x = rng.normal();
  return Tensor::from_values(rows, cols, std::move(v));
}

std::vector<double> to_vec(std::span<const double> s) { return {s.begin(), s.end()}; }

}  // namespace

TEST_CASE("zero network outputs zero") {
  const MlpSpec spec{{3, 4, 2}, Activation::ReLU, Head::Deterministic};
  Mlp net(spec, {Tensor::zeros(3, 4, true), Tensor::zeros(1, 4, true), Tensor::zeros(4, 2, true),
                 Tensor::zeros(1, 2, true)});
  Rng rng(1, 1);
  const Tensor out = net.forward(random_input(5, 3, rng));
  for (double v : out.values()) CHECK(v == 0.0);
}

TEST_CASE("identity layer passes input through") {
  const MlpSpec spec{{3, 3}, Activation::ReLU, Head::Deterministic};
  Mlp net(spec, {Tensor::from_values(3, 3, {1, 0, 0, 0, 1, 0, 0, 0, 1}, true), Tensor::zeros(1, 3, true)});
  const Tensor in = Tensor::from_values(2, 3, {1, -2, 3, 0.5, 0, -7});
  CHECK(to_vec(net.forward(in).values()) == to_vec(in.values()));
}

TEST_CASE("hand-set relu network") {
  const MlpSpec spec{{1, 2, 1}, Activation::ReLU, Head::Deterministic};
  Mlp net(spec, {Tensor::from_values(1, 2, {1, -1}, true), Tensor::zeros(1, 2, true),
                 Tensor::from_values(2, 1, {1, 1}, true), Tensor::zeros(1, 1, true)});
  CHECK(net.forward(Tensor::scalar(2.0)).item() == 2.0);
  CHECK(net.forward(Tensor::scalar(-3.0)).item() == 3.0);
}

TEST_CASE("shape mismatch is rejected") {
  Rng rng(2, 1);
  Mlp net(MlpSpec{{3, 4, 2}}, rng);
  CHECK_THROWS(net.forward(Tensor::zeros(1, 4)));
  CHECK_THROWS(matmul(Tensor::zeros(2, 3), Tensor::zeros(2, 3)));
}

TEST_CASE("gaussian head splits mean and clamped log-std") {
  Rng rng(3, 1);
  Mlp net(MlpSpec{{2, 5, 3}}, rng);
  const auto out = net.forward_gaussian(random_input(4, 2, rng));
  CHECK(out.mean.cols() == 3);
  CHECK(out.log_std.cols() == 3);
  for (double v : out.log_std.values()) {
    CHECK(v >= kLogStdMin);
    CHECK(v <= kLogStdMax);
  }
}

TEST_CASE("backward of x squared") {
  Tensor x = Tensor::scalar(3.0, true);
  square(x).backward();
  CHECK(x.grad()[0] == 6.0);
}

TEST_CASE("gradients of independent subgraphs add") {
  Tensor a = Tensor::scalar(2.0, true), b = Tensor::scalar(-1.5, true);
  (square(a) + exp(b)).backward();
  CHECK(a.grad()[0] == 4.0);
  CHECK(b.grad()[0] == doctest::Approx(std::exp(-1.5)));
}

TEST_CASE("repeated backward accumulates and freed graphs throw") {
  Tensor x = Tensor::scalar(3.0, true);
  const Tensor loss = square(x);
  loss.backward(true);
  loss.backward();
  CHECK(x.grad()[0] == 12.0);
  CHECK_THROWS_AS(loss.backward(), std::logic_error);
  x.zero_grad();
  CHECK(x.grad()[0] == 0.0);
}

TEST_CASE("no-grad guard records nothing") {
  Tensor x = Tensor::scalar(1.0, true);
  Tensor y;
  {
    NoGradGuard g;
    CHECK_FALSE(grad_enabled());
    y = square(x);
  }
  CHECK(grad_enabled());
  CHECK_FALSE(y.requires_grad());
}

TEST_CASE("gradcheck on a quadratic") {
  Rng rng(4, 1);
  Tensor p = Tensor::from_values(10, 7, std::vector<double>(70, 0.0), true);
  for (double& v : p.mutable_values()) v = rng.normal();
  const Tensor c = random_input(10, 7, rng);
  std::vector<Tensor> params{p};
  const auto r = finite_diff_check([&] { return sum(square(p - c)) * 0.5; }, params, 1e-4, rng);
  CHECK(r.coordinates_checked >= 50);
  CHECK(r.max_relative_error < 1e-8);
}

TEST_CASE("gradcheck on tanh and elu networks") {
  for (Activation act : {Activation::Tanh, Activation::ELU}) {
    Rng rng(5, 1);
    Mlp net(MlpSpec{{4, 8, 8, 3}, act, Head::GaussianDiag}, rng);
    const Tensor in = random_input(6, 4, rng);
    const Tensor target = random_input(6, 3, rng);
    std::vector<Tensor> params = net.parameters();
    const auto r = finite_diff_check(
        [&] {
          const auto out = net.forward_gaussian(in);
          return gaussian_nll(target, out.mean, out.log_std) + kl_diag_standard(out.mean, out.log_std);
        },
        params, 1e-4, rng);
    CHECK(r.max_relative_error < 1e-4);
  }
}

TEST_CASE("gradcheck flags a corrupted gradient") {
  Rng rng(6, 1);
  Mlp net(MlpSpec{{3, 6, 1}, Activation::Tanh, Head::Deterministic}, rng);
  const Tensor in = random_input(5, 3, rng);
  auto loss = [&] { return sum(square(net.forward(in))); };
  std::vector<Tensor> params = net.parameters();
  for (Tensor& p : params) p.zero_grad();
  loss().backward();
  std::vector<std::vector<double>> grads;
  for (const Tensor& p : params) grads.push_back(to_vec(p.grad()));
  for (auto& g : grads)
    for (double& v : g) v *= 1.1;
  const auto r = finite_diff_check_against([&] { return loss().item(); }, params, grads, 1e-4, rng);
  CHECK(r.max_relative_error > 1e-2);
}

TEST_CASE("adam first steps") {
  Tensor p = Tensor::scalar(1.0, true);
  std::vector<Tensor> ps{p};
  AdamState zero{{.lr = 0.1}};
  p.mutable_grad()[0] = 0.0;
  adam_step(zero, ps);
  CHECK(p.item() == 1.0);

  AdamState st{{.lr = 0.1}};
  p.mutable_grad()[0] = 1.0;
  adam_step(st, ps);
  CHECK(p.item() == doctest::Approx(0.9).epsilon(1e-6));

  double last = 0.9;
  double prev_delta = 0.1;
  for (int i = 0; i < 2; ++i) {
    p.mutable_grad()[0] = 0.0;
    adam_step(st, ps);
    const double delta = last - p.item();
    CHECK(delta > 0.0);
    CHECK(delta < prev_delta);
    prev_delta = delta;
    last = p.item();
  }
}

TEST_CASE("adam rejects non-finite gradients without touching params") {
  Tensor p = Tensor::from_values(1, 2, {1.0, 2.0}, true);
  std::vector<Tensor> ps{p};
  AdamState st;
  p.mutable_grad()[0] = 0.5;
  p.mutable_grad()[1] = std::nan("");
  CHECK_THROWS_AS(adam_step(st, ps), RuntimeAbort);
  CHECK(p.at(0, 0) == 1.0);
}

TEST_CASE("adam updates do not couple parameters") {
  Tensor a = Tensor::from_values(1, 3, {1, 2, 3}, true), b = Tensor::from_values(2, 1, {-1, 4}, true);
  Tensor a2 = a.clone(), b2 = b.clone();
  std::vector<Tensor> fwd{a, b}, rev{b2, a2};
  AdamState s1, s2;
  for (int i = 0; i < 5; ++i) {
    for (Tensor* t : {&a, &b, &a2, &b2}) t->zero_grad();
    for (std::size_t k = 0; k < 3; ++k) a.mutable_grad()[k] = a2.mutable_grad()[k] = 0.3 * k - 0.1 * i;
    for (std::size_t k = 0; k < 2; ++k) b.mutable_grad()[k] = b2.mutable_grad()[k] = 1.0 + k + i;
    adam_step(s1, fwd);
    adam_step(s2, rev);
  }
  CHECK(to_vec(a.values()) == to_vec(a2.values()));
  CHECK(to_vec(b.values()) == to_vec(b2.values()));
}

TEST_CASE("reparameterization") {
  Rng rng(7, 1);
  const Tensor m = Tensor::from_values(1, 3, {1.0, -2.0, 0.5});
  const Tensor tiny = Tensor::full(1, 3, -5.0);
  const Tensor noise = Tensor::from_values(1, 3, {0.3, -1.2, 2.0});
  const Tensor s = gaussian_reparameterize(m, tiny, noise);
  for (std::size_t i = 0; i < 3; ++i) CHECK(std::abs(s.at(0, i) - m.at(0, i)) <= std::exp(-5.0) * 2.0 + 1e-15);

  const std::size_t n = 100000;
  const Tensor draws = gaussian_reparameterize(Tensor::zeros(n, 1), Tensor::zeros(n, 1), rng);
  double sm = 0, ss = 0;
  for (double v : draws.values()) {
    sm += v;
    ss += v * v;
  }
  const double var = ss / n - (sm / n) * (sm / n);
  CHECK(std::abs(var - 1.0) < 0.02);

  Tensor mg = Tensor::from_values(1, 2, {0.1, 0.2}, true);
  Tensor lg = Tensor::from_values(1, 2, {0.0, -1.0}, true);
  sum(gaussian_reparameterize(mg, lg, rng)).backward();
  CHECK(mg.grad()[0] == 1.0);
  CHECK(mg.grad()[1] == 1.0);
}

TEST_CASE("kl examples") {
  CHECK(kl_diag_standard(Tensor::scalar(0.0), Tensor::scalar(0.0)).item() == 0.0);
  CHECK(kl_diag_standard(Tensor::scalar(1.0), Tensor::scalar(0.0)).item() == doctest::Approx(0.5));
  Rng rng(8, 1);
  for (int i = 0; i < 1000; ++i) {
    const double mu = rng.normal(0, 3), ls = rng.normal(0, 2);
    CHECK(kl_diag_standard(Tensor::scalar(mu), Tensor::scalar(ls)).item() >= 0.0);
  }
}

TEST_CASE("minimizing kl reaches the standard normal") {
  Tensor mu = Tensor::from_values(1, 3, {2.0, -1.0, 0.5}, true);
  Tensor ls = Tensor::from_values(1, 3, {1.0, -1.5, 0.3}, true);
  Adam opt({mu, ls}, {.lr = 0.05});
  for (int i = 0; i < 3000; ++i) {
    opt.zero_grad();
    kl_diag_standard(mu, ls).backward();
    opt.step();
  }
  for (double v : mu.values()) CHECK(std::abs(v) < 1e-3);
  for (double v : ls.values()) CHECK(std::abs(v) < 1e-3);
}

TEST_CASE("gaussian nll examples") {
  CHECK(gaussian_nll(Tensor::scalar(0.3), Tensor::scalar(0.3), Tensor::scalar(0.0)).item() ==
        doctest::Approx(0.91894).epsilon(1e-5));
  CHECK(gaussian_nll(Tensor::scalar(1.0), Tensor::scalar(0.0), Tensor::scalar(0.0)).item() ==
        doctest::Approx(1.41894).epsilon(1e-5));
  const double a = gaussian_nll(Tensor::scalar(0.0), Tensor::scalar(0.0), Tensor::scalar(0.0)).item();
  const double b = gaussian_nll(Tensor::scalar(0.0), Tensor::scalar(0.0), Tensor::scalar(std::log(2.0))).item();
  CHECK(b - a == doctest::Approx(std::log(2.0)));
}

TEST_CASE("seeded init reproduces parameters") {
  Rng r1(9, 5), r2(9, 5);
  Mlp a(MlpSpec{{4, 8, 2}}, r1), b(MlpSpec{{4, 8, 2}}, r2);
  for (std::size_t i = 0; i < a.parameters().size(); ++i)
    CHECK(to_vec(a.parameters()[i].values()) == to_vec(b.parameters()[i].values()));
  for (double v : a.parameters()[1].values()) CHECK(v == 0.0);
  const double bound = 1.0 / std::sqrt(4.0);
  for (double v : a.parameters()[0].values()) CHECK(std::abs(v) <= bound);
}

TEST_CASE("mlp copies are deep") {
  Rng rng(10, 1);
  Mlp a(MlpSpec{{2, 3, 1}}, rng);
  Mlp b = a;
  b.parameters()[0].node()->value[0] += 1.0;
  CHECK(a.parameters()[0].values()[0] != b.parameters()[0].values()[0]);
}

TEST_CASE("checkpoint round trip") {
  Rng rng(11, 1);
  Mlp a(MlpSpec{{5, 7, 7, 2}, Activation::Tanh, Head::GaussianDiag}, rng);
  std::stringstream ss;
  save_checkpoint(ss, a);
  const Mlp b = load_checkpoint(ss);
  CHECK(b.spec() == a.spec());
  for (std::size_t i = 0; i < a.parameters().size(); ++i)
    CHECK(to_vec(a.parameters()[i].values()) == to_vec(b.parameters()[i].values()));
  const Tensor in = random_input(3, 5, rng);
  CHECK(to_vec(a.forward(in).values()) == to_vec(b.forward(in).values()));

  // Header is little-endian u32s: n_widths, widths..., activation, head.
  const std::string bytes = ss.str();
  CHECK(bytes.size() == 4 * (1 + 4 + 2) + 8 * a.parameter_count());
  CHECK(bytes.substr(0, 8) == std::string("\x04\x00\x00\x00\x05\x00\x00\x00", 8));

  std::stringstream bad("\x01\x00");
  CHECK_THROWS(load_checkpoint(bad));
}
