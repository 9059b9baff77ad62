#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include <Eigen/Eigenvalues>

#include "tbandit/baselines/linucb.hpp"
#include "tbandit/baselines/tabular.hpp"
#include "tbandit/env/domain.hpp"

using namespace tbandit;
using namespace tbandit::baselines;

namespace {
const std::vector<double> w0{0.0};
const std::vector<double> w1{1.0};
}  // namespace

TEST_CASE("ucb picks untried arms first") {
  TabularBanditState s;
  CHECK(ucb_select(s, w0, 1) == 0);
  CHECK(ucb_select(s, w1, 1) == 0);
  tabular_update(s, w1, 0, 1.0);
  CHECK(ucb_select(s, w1, 2) == 1);
  CHECK(ucb_select(s, w0, 2) == 0);
}

TEST_CASE("ucb index examples") {
  TabularBanditState s;
  s.counts[0] = {10, 10};
  s.means[0] = {0.5, 0.5};
  CHECK(ucb_select(s, w0, 100) == 0);

  s.counts[0] = {100, 4};
  s.means[0] = {0.6, 0.5};
  const double bonus1 = std::sqrt(2.0 * std::log(104.0) / 4.0);
  CHECK(bonus1 == doctest::Approx(1.524).epsilon(1e-3));
  CHECK(ucb_index(0.5, 4, 104) == doctest::Approx(0.5 + bonus1));
  CHECK(ucb_select(s, w0, 104) == 1);
}

TEST_CASE("ucb bonus shrinks with count") {
  for (std::size_t n = 1; n < 200; ++n) CHECK(ucb_index(0.0, n + 1, 500) < ucb_index(0.0, n, 500));
}

TEST_CASE("ucb argmax is invariant to positive rescaling at equal counts") {
  TabularBanditState s;
  s.counts[1] = {20, 20};
  s.means[1] = {0.3, 0.7};
  const Arm before = ucb_select(s, w1, 50);
  s.means[1] = {0.3 * 1.7, 0.7 * 1.7};
  CHECK(ucb_select(s, w1, 50) == before);
}

TEST_CASE("thompson sampling with flat priors is fair") {
  TabularBanditState s;
  Rng rng(1, 1);
  int ones = 0;
  const int n = 20000;
  for (int i = 0; i < n; ++i) ones += ts_select(s, w0, rng) == 1;
  CHECK(std::abs(ones - n / 2) < 3 * std::sqrt(n * 0.25));
}

TEST_CASE("thompson sampling with concentrated priors") {
  TabularBanditState s;
  s.alpha[0] = {100, 1};
  s.beta[0] = {1, 100};
  Rng rng(2, 1);
  int zeros = 0;
  for (int i = 0; i < 10000; ++i) zeros += ts_select(s, w0, rng) == 0;
  CHECK(zeros >= 9990);
}

TEST_CASE("tabular update examples") {
  TabularBanditState s;
  tabular_update(s, w0, 1, 1.0);
  CHECK(s.counts[0][1] == 1);
  CHECK(s.means[0][1] == 1.0);
  CHECK(s.alpha[0][1] == 2.0);
  CHECK(s.beta[0][1] == 1.0);

  TabularBanditState r;
  r.counts[1][0] = 2;
  r.means[1][0] = 0.5;
  tabular_update(r, w1, 0, 1.0);
  CHECK(r.means[1][0] == doctest::Approx(2.0 / 3.0));

  CHECK_THROWS_AS(tabular_update(r, w1, 0, 1.5), std::invalid_argument);
  CHECK_THROWS_AS(tabular_update(r, w1, 0, -0.1), std::invalid_argument);
}

TEST_CASE("posterior concentrates on the Bernoulli rate") {
  TabularBanditState s;
  Rng rng(3, 1);
  for (int i = 0; i < 10000; ++i) tabular_update(s, w1, 0, rng.bernoulli(0.3) ? 1.0 : 0.0);
  const double mean = s.alpha[1][0] / (s.alpha[1][0] + s.beta[1][0]);
  CHECK(std::abs(mean - 0.3) < 0.02);
}

TEST_CASE("naive warm start inherits the source conditional means") {
  // Source c_s=0.9: p(z=1|w=0) = 0.2*0.9/(0.2*0.9+0.9*0.1) = 2/3, and y = x xor z,
  // so E[Y|w=0,x=0] = 2/3 in the source.
  Rng rng(4, 1);
  const PriorDataset d = env::generate_prior_dataset(env::DomainSpec::binary(0.9), {}, 1000, rng);
  TabularBanditState s;
  warm_start_tabular(s, d);
  CHECK(s.means[0][0] > s.means[0][1]);
  CHECK(s.counts[0][0] + s.counts[0][1] + s.counts[1][0] + s.counts[1][1] == 1000);
}

TEST_CASE("warm start leaves empty cells at the prior") {
  PriorDataset d;
  for (int i = 0; i < 10; ++i) d.push_back({{1.0}, {1.0}, 0, 0.0});
  TabularBanditState s;
  warm_start_tabular(s, d);
  CHECK(s.counts[0][0] == 0);
  CHECK(s.counts[0][1] == 0);
  CHECK(s.alpha[0][0] == 1.0);
  CHECK(s.beta[0][1] == 1.0);
  CHECK(s.counts[1][0] == 10);
}

TEST_CASE("fresh linucb ties to arm 0") {
  LinUcbState s(3);
  CHECK(linucb_select(s, std::vector<double>{0.2, -1.0, 3.0}) == 0);
  const auto scores = linucb_scores(s, std::vector<double>{3.0, 4.0, 0.0});
  CHECK(scores[0] == doctest::Approx(5.0));
  CHECK(scores[1] == doctest::Approx(5.0));
}

TEST_CASE("linucb exploitation examples") {
  LinUcbState s(2, 2, 0.0);
  const std::vector<double> w{1.0, 2.0};
  s.b[0] = Eigen::Vector2d(1.0, 2.0);
  CHECK(linucb_scores(s, w)[0] == doctest::Approx(5.0));
  CHECK(linucb_select(s, w) == 0);

  LinUcbState t(2);
  for (int i = 0; i < 1000; ++i) {
    linucb_update(t, w, 0, 0.0);
    linucb_update(t, w, 1, 1.0);
  }
  CHECK(linucb_select(t, w) == 1);
}

TEST_CASE("linucb update examples") {
  LinUcbState s(3);
  linucb_update(s, std::vector<double>{1.0, 0.0, 0.0}, 0, 0.0);
  CHECK(s.A[0](0, 0) == 2.0);
  CHECK(s.A[0](1, 1) == 1.0);
  CHECK(s.A[0](0, 1) == 0.0);
  CHECK(s.b[0].isZero());

  LinUcbState a(2), b(2);
  const std::vector<double> w{0.5, -1.5};
  linucb_update(a, w, 1, 0.7);
  linucb_update(a, w, 1, 0.7);
  b.b[1] += 2 * 0.7 * Eigen::Vector2d(0.5, -1.5);
  CHECK(a.b[1].isApprox(b.b[1]));
}

TEST_CASE("linucb A stays SPD with eigenvalues >= 1") {
  LinUcbState s(4);
  Rng rng(5, 1);
  for (int i = 0; i < 500; ++i) {
    std::vector<double> w(4);
    for (double& v : w) v = rng.normal(0.0, 3.0);
    linucb_update(s, w, rng.uniform_index(2), rng.normal());
  }
  for (const auto& A : s.A) {
    CHECK((A - A.transpose()).norm() == 0.0);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(A);
    CHECK(es.eigenvalues().minCoeff() >= 1.0 - 1e-9);
  }
}

TEST_CASE("linucb warm start") {
  LinUcbState s(2);
  warm_start_linucb(s, PriorDataset{});
  CHECK(s.A[0].isIdentity());
  CHECK(s.b[1].isZero());

  PriorDataset d;
  for (int i = 0; i < 20; ++i) d.push_back({{1.0, double(i)}, {0.0}, 0, 1.0});
  warm_start_linucb(s, d);
  CHECK(s.A[1].isIdentity());
  CHECK(!s.A[0].isIdentity());
}

TEST_CASE("warm-started linucb prefers the wrong arm on target proxies") {
  env::ProxyParams p;
  p.dim_w = 5;
  p.a.assign(5, 1.0);
  p.b.assign(5, 0.0);
  const auto mech = env::DomainSpec::linear_gaussian(env::ContextParams::gaussian({8.0}), p);
  const auto pair =
      env::make_domain_pair(mech, env::ContextParams::gaussian({8.0}), env::ContextParams::gaussian({2.0}));
  Rng rng(6, 1);
  const PriorDataset d = env::generate_prior_dataset(pair.source, {}, 1000, rng);
  LinUcbState s(5);
  warm_start_linucb(s, d);
  int arm0 = 0;
  for (int i = 0; i < 200; ++i) {
    const auto cp = env::sample_context_proxy(pair.target, rng);
    arm0 += linucb_select(s, cp.w) == 0;
  }
  CHECK(arm0 > 150);
}
