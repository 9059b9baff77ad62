#include "tbandit/vae/probe.hpp"

#include <cmath>
#include <stdexcept>

#include "tbandit/nn/losses.hpp"

namespace tbandit::vae {
namespace {

// Running per-component mean and variance (Welford).
class Moments {
 public:
  explicit Moments(std::size_t dim) : mean_(dim, 0.0), m2_(dim, 0.0) {}

  void add(const std::vector<double>& x) {
    ++n_;
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double delta = x[i] - mean_[i];
      mean_[i] += delta / static_cast<double>(n_);
      m2_[i] += delta * (x[i] - mean_[i]);
    }
  }

  const std::vector<double>& mean() const { return mean_; }
  std::vector<double> standard_error() const {
    std::vector<double> se(mean_.size(), 0.0);
    if (n_ < 2) return se;
    const double n = static_cast<double>(n_);
    for (std::size_t i = 0; i < se.size(); ++i) se[i] = std::sqrt(m2_[i] / (n - 1.0) / n);
    return se;
  }

 private:
  std::size_t n_ = 0;
  std::vector<double> mean_;
  std::vector<double> m2_;
};

double normalized_norm(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s) / static_cast<double>(v.size());
}

ProbeResult finish(const Moments& two, const Moments& autoenc, std::size_t n) {
  ProbeResult r;
  r.two_decoder_mean = two.mean();
  r.two_decoder_se = two.standard_error();
  r.autoencoder_mean = autoenc.mean();
  r.autoencoder_se = autoenc.standard_error();
  r.g_two_decoder = normalized_norm(r.two_decoder_mean);
  r.g_autoencoder = normalized_norm(r.autoencoder_mean);
  r.n_samples = n;
  return r;
}

bool within(const std::vector<double>& mean, const std::vector<double>& se, double k) {
  for (std::size_t i = 0; i < mean.size(); ++i) {
    if (std::abs(mean[i]) > k * se[i]) return false;
  }
  return true;
}

// d/dtheta log Bern(w; theta).
double bernoulli_score(int w, double theta) { return w ? 1.0 / theta : -1.0 / (1.0 - theta); }

std::vector<double> decoder_w_score(const VaeModel& model, std::span<const double> w, const std::vector<double>& z) {
  const nn::Mlp& dec = model.decoder_w();
  std::vector<nn::Tensor> params = dec.parameters();
  for (nn::Tensor& p : params) p.zero_grad();
  const nn::Tensor zt = nn::Tensor::from_values(1, z.size(), z);
  const nn::Tensor wt = nn::Tensor::from_values(1, w.size(), std::vector<double>(w.begin(), w.end()));
  const nn::GaussianOutput out = dec.forward_gaussian(zt);
  // log-likelihood = -nll
  (-nn::gaussian_nll(wt, out.mean, out.log_std)).backward();
  std::vector<double> g;
  for (nn::Tensor& p : params) {
    const auto grad = p.mutable_grad();
    g.insert(g.end(), grad.begin(), grad.end());
    p.zero_grad();
  }
  return g;
}

}  // namespace

bool ProbeResult::two_decoder_consistent_with_zero(double k) const {
  return within(two_decoder_mean, two_decoder_se, k);
}

bool ProbeResult::autoencoder_consistent_with_zero(double k) const {
  return within(autoencoder_mean, autoencoder_se, k);
}

ProbeResult corollary1_probe_binary(const std::array<double, 2>& cpt_w, double c_source, double c_target,
                                    std::size_t n_samples, Rng& rng) {
  for (double theta : cpt_w) {
    if (!(theta > 0.0 && theta < 1.0)) throw std::invalid_argument("corollary1_probe_binary: cpt must lie in (0, 1)");
  }
  if (n_samples < 2) throw std::invalid_argument("corollary1_probe_binary: need at least two samples");

  const double p_w1_source = (1.0 - c_source) * cpt_w[0] + c_source * cpt_w[1];
  const std::array<double, 2> weight{1.0 - c_source, c_source};  // dP(w=1)/dtheta_z
  Moments two(2), autoenc(2);
  for (std::size_t i = 0; i < n_samples; ++i) {
    const int z = rng.bernoulli(c_target) ? 1 : 0;
    const int w = rng.bernoulli(cpt_w[z]) ? 1 : 0;
    std::vector<double> g2(2, 0.0);
    g2[z] = bernoulli_score(w, cpt_w[z]);
    const double marginal_score = bernoulli_score(w, p_w1_source);
    std::vector<double> ga(2);
    for (int k = 0; k < 2; ++k) ga[k] = 2.0 * g2[k] - weight[k] * marginal_score;
    two.add(g2);
    autoenc.add(ga);
  }
  return finish(two, autoenc, n_samples);
}

ProbeResult corollary1_probe_neural(const VaeModel& decoders, const VaeModel& autoencoder,
                                    const env::DomainSpec& target, std::size_t n_samples, Rng& rng) {
  if (n_samples < 2) throw std::invalid_argument("corollary1_probe_neural: need at least two samples");
  if (!(decoders.architecture().hidden == autoencoder.architecture().hidden) ||
      decoders.dim_w() != autoencoder.dim_w() || decoders.dim_z() != autoencoder.dim_z()) {
    throw std::invalid_argument("corollary1_probe_neural: models must share an architecture");
  }
  // Gradients are taken on private copies so the caller's models keep no
  // gradient buffers.
  const VaeModel dec_copy = decoders;
  const VaeModel auto_copy = autoencoder;
  const std::size_t n_params = dec_copy.decoder_w().parameter_count();
  Moments two(n_params), autoenc(n_params);
  for (std::size_t i = 0; i < n_samples; ++i) {
    const env::ContextProxyPair s = env::sample_context_proxy(target, rng);
    two.add(decoder_w_score(dec_copy, s.w, s.z));
    autoenc.add(decoder_w_score(auto_copy, s.w, posterior_mean(auto_copy, s.w)));
  }
  return finish(two, autoenc, n_samples);
}

}  // namespace tbandit::vae
