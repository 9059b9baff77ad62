#include "tbandit/vae/model.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "tbandit/nn/losses.hpp"

namespace tbandit::vae {
namespace {

nn::MlpSpec gaussian_mlp(std::size_t in, const std::vector<std::size_t>& hidden, std::size_t out,
                         nn::Activation activation) {
  nn::MlpSpec spec;
  spec.layer_widths.push_back(in);
  spec.layer_widths.insert(spec.layer_widths.end(), hidden.begin(), hidden.end());
  spec.layer_widths.push_back(out);
  spec.activation = activation;
  spec.head = nn::Head::GaussianDiag;
  return spec;
}

}  // namespace

void VaeArchitecture::validate() const {
  if (dim_w == 0 || dim_z == 0) throw std::invalid_argument("VaeArchitecture: dimensions must be positive");
  // beta = 0 is allowed here for loss diagnostics; experiment configs require beta > 0.
  if (!(beta >= 0.0) || !std::isfinite(beta)) throw std::invalid_argument("VaeArchitecture: beta must be >= 0");
  if (num_arms == 0) throw std::invalid_argument("VaeArchitecture: need at least one arm");
}

VaeModel::VaeModel(VaeArchitecture arch, Rng& init_rng)
    : arch_(std::move(arch)),
      encoder_((arch_.validate(), gaussian_mlp(arch_.dim_w, arch_.hidden, arch_.dim_z, arch_.activation)), init_rng),
      decoder_w_(gaussian_mlp(arch_.dim_z, arch_.hidden, arch_.dim_w, arch_.activation), init_rng) {
  for (std::size_t a = 0; a < arch_.num_arms; ++a) {
    decoder_y_.emplace_back(gaussian_mlp(arch_.dim_z, arch_.hidden, 1, arch_.activation), init_rng);
  }
}

std::vector<nn::Tensor> VaeModel::parameters() const {
  std::vector<nn::Tensor> out = encoder_.parameters();
  const auto rest = decoder_parameters();
  out.insert(out.end(), rest.begin(), rest.end());
  return out;
}

std::vector<nn::Tensor> VaeModel::decoder_parameters() const {
  std::vector<nn::Tensor> out = decoder_w_.parameters();
  for (const nn::Mlp& d : decoder_y_) out.insert(out.end(), d.parameters().begin(), d.parameters().end());
  return out;
}

std::vector<double> VaeModel::flat_values() const {
  std::vector<double> out;
  for (const nn::Tensor& p : parameters()) out.insert(out.end(), p.values().begin(), p.values().end());
  return out;
}

void VaeModel::set_flat_values(std::span<const double> values) {
  std::size_t offset = 0;
  for (nn::Tensor& p : parameters()) {
    auto dst = p.mutable_values();
    if (offset + dst.size() > values.size()) throw std::invalid_argument("set_flat_values: too few values");
    std::copy(values.begin() + offset, values.begin() + offset + dst.size(), dst.begin());
    offset += dst.size();
  }
  if (offset != values.size()) throw std::invalid_argument("set_flat_values: too many values");
}

Batch make_batch(std::span<const Record> records) {
  if (records.empty()) throw std::invalid_argument("make_batch: empty batch");
  const std::size_t d = records.front().w.size();
  std::vector<double> w;
  w.reserve(records.size() * d);
  Batch batch;
  for (const Record& r : records) {
    if (r.w.size() != d) throw std::invalid_argument("make_batch: ragged proxy dimension");
    w.insert(w.end(), r.w.begin(), r.w.end());
    batch.x.push_back(r.x);
    batch.y.push_back(r.y);
  }
  batch.w = nn::Tensor::from_values(records.size(), d, std::move(w));
  return batch;
}

Batch make_batch(const PriorDataset& data, std::span<const std::size_t> rows) {
  if (rows.empty()) throw std::invalid_argument("make_batch: empty batch");
  const std::size_t d = data.dim_w();
  std::vector<double> w;
  w.reserve(rows.size() * d);
  Batch batch;
  for (std::size_t i : rows) {
    const PriorSample& s = data[i];
    w.insert(w.end(), s.w.begin(), s.w.end());
    batch.x.push_back(s.x);
    batch.y.push_back(s.y);
  }
  batch.w = nn::Tensor::from_values(rows.size(), d, std::move(w));
  return batch;
}

nn::Tensor stack_contexts(const PriorDataset& data, std::span<const std::size_t> rows) {
  const std::size_t d = data.dim_z();
  if (d == 0) throw std::invalid_argument("stack_contexts: dataset has no observed contexts");
  std::vector<double> z;
  z.reserve(rows.size() * d);
  for (std::size_t i : rows) z.insert(z.end(), data[i].z.begin(), data[i].z.end());
  return nn::Tensor::from_values(rows.size(), d, std::move(z));
}

nn::Tensor reward_nll(const VaeModel& model, const nn::Tensor& z, std::span<const Arm> x, std::span<const double> y) {
  nn::Tensor total;
  for (Arm a = 0; a < model.num_arms(); ++a) {
    std::vector<std::size_t> rows;
    std::vector<double> targets;
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (x[i] >= model.num_arms()) {
        throw std::out_of_range("reward_nll: arm " + std::to_string(x[i]) + " out of range");
      }
      if (x[i] == a) {
        rows.push_back(i);
        targets.push_back(y[i]);
      }
    }
    if (rows.empty()) continue;
    const nn::Tensor za = nn::gather_rows(z, rows);
    const nn::GaussianOutput out = model.decoder_y(a).forward_gaussian(za);
    const nn::Tensor target = nn::Tensor::from_values(rows.size(), 1, std::move(targets));
    const nn::Tensor term = nn::gaussian_nll(target, out.mean, out.log_std);
    total = total.defined() ? total + term : term;
  }
  return total;
}

nn::Tensor elbo_transfer_loss(const VaeModel& model, const Batch& batch, Rng& rng) {
  std::vector<double> eps(batch.size() * model.dim_z());
  for (double& e : eps) e = rng.normal();
  return elbo_transfer_loss(model, batch, nn::Tensor::from_values(batch.size(), model.dim_z(), std::move(eps)));
}

nn::Tensor elbo_transfer_loss(const VaeModel& model, const Batch& batch, const nn::Tensor& noise) {
  if (batch.size() == 0) throw std::invalid_argument("elbo_transfer_loss: empty batch");
  const nn::GaussianOutput q = model.encoder().forward_gaussian(batch.w);
  const nn::Tensor z = nn::gaussian_reparameterize(q.mean, q.log_std, noise);
  const nn::GaussianOutput pw = model.decoder_w().forward_gaussian(z);
  const nn::Tensor nll_w = nn::gaussian_nll(batch.w, pw.mean, pw.log_std);
  const nn::Tensor nll_y = reward_nll(model, z, batch.x, batch.y);
  const nn::Tensor kl = nn::kl_diag_standard(q.mean, q.log_std);
  return (nll_w + nll_y + kl * model.beta()) * (1.0 / static_cast<double>(batch.size()));
}

nn::Tensor decoder_loss(const VaeModel& model, const Batch& batch, const nn::Tensor& z) {
  if (batch.size() == 0) throw std::invalid_argument("decoder_loss: empty batch");
  const nn::GaussianOutput pw = model.decoder_w().forward_gaussian(z);
  const nn::Tensor nll_w = nn::gaussian_nll(batch.w, pw.mean, pw.log_std);
  const nn::Tensor nll_y = reward_nll(model, z, batch.x, batch.y);
  return (nll_w + nll_y) * (1.0 / static_cast<double>(batch.size()));
}

std::vector<double> posterior_mean(const VaeModel& model, std::span<const double> w) {
  nn::NoGradGuard no_grad;
  const nn::Tensor input = nn::Tensor::from_values(1, w.size(), std::vector<double>(w.begin(), w.end()));
  const nn::GaussianOutput q = model.encoder().forward_gaussian(input);
  return {q.mean.values().begin(), q.mean.values().end()};
}

Arm act(const VaeModel& model, std::span<const double> w, Rng* sample_rng) {
  nn::NoGradGuard no_grad;
  const nn::Tensor input = nn::Tensor::from_values(1, w.size(), std::vector<double>(w.begin(), w.end()));
  const nn::GaussianOutput q = model.encoder().forward_gaussian(input);
  const nn::Tensor z = sample_rng ? nn::gaussian_reparameterize(q.mean, q.log_std, *sample_rng) : q.mean;
  Arm best = 0;
  double best_value = 0.0;
  for (Arm a = 0; a < model.num_arms(); ++a) {
    const double value = model.decoder_y(a).forward_gaussian(z).mean.item();
    if (a == 0 || value > best_value) {
      best = a;
      best_value = value;
    }
  }
  return best;
}

}  // namespace tbandit::vae
