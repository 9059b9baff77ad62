#include "tbandit/vae/pretrain.hpp"

#include <numeric>
#include <stdexcept>
#include <utility>

#include "tbandit/nn/adam.hpp"

namespace tbandit::vae {
namespace {

template <typename BatchLoss, typename FullLoss>
PretrainReport run_pretraining(VaeModel& model, std::vector<nn::Tensor> params, std::size_t n,
                               const PretrainOptions& options, Rng& rng, BatchLoss batch_loss, FullLoss full_loss) {
  if (options.batch_size == 0) throw std::invalid_argument("pretrain: batch size must be positive");
  if (!(options.lr > 0.0)) throw std::invalid_argument("pretrain: lr must be positive");

  PretrainReport report;
  report.final_lr = options.lr;
  if (options.epochs == 0) return report;

  nn::Adam adam(params, {.lr = options.lr});
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  report.losses.push_back(full_loss());

  for (std::size_t epoch = 0; epoch < options.epochs; ++epoch) {
    const std::vector<double> saved_params = model.flat_values();
    const nn::AdamState saved_adam = adam.state();

    for (std::size_t i = n; i > 1; --i) std::swap(order[i - 1], order[rng.uniform_index(i)]);
    for (std::size_t start = 0; start < n; start += options.batch_size) {
      const std::size_t stop = std::min(n, start + options.batch_size);
      const std::span<const std::size_t> rows(order.data() + start, stop - start);
      adam.zero_grad();
      batch_loss(rows).backward();
      adam.step();
    }

    const double loss = full_loss();
    if (loss > report.losses.back()) {
      model.set_flat_values(saved_params);
      const double halved = adam.lr() * 0.5;
      adam.state() = saved_adam;
      adam.set_lr(halved);
      ++report.rejected_epochs;
      report.losses.push_back(report.losses.back());
    } else {
      report.losses.push_back(loss);
    }
  }
  report.final_lr = adam.lr();
  return report;
}

std::vector<std::size_t> all_rows(std::size_t n) {
  std::vector<std::size_t> rows(n);
  std::iota(rows.begin(), rows.end(), std::size_t{0});
  return rows;
}

}  // namespace

PretrainReport pretrain_decoders(VaeModel& model, const PriorDataset& data, const PretrainOptions& options, Rng& rng) {
  if (data.empty()) throw std::invalid_argument("pretrain_decoders: empty dataset");
  if (data.dim_z() != model.dim_z()) {
    throw std::invalid_argument("pretrain_decoders: dataset lacks contexts matching the latent dimension");
  }
  if (data.dim_w() != model.dim_w()) throw std::invalid_argument("pretrain_decoders: proxy dimension mismatch");

  const std::vector<std::size_t> rows = all_rows(data.size());
  const Batch full = make_batch(data, rows);
  const nn::Tensor full_z = stack_contexts(data, rows);
  auto batch_loss = [&](std::span<const std::size_t> r) {
    return decoder_loss(model, make_batch(data, r), stack_contexts(data, r));
  };
  auto full_loss = [&] {
    nn::NoGradGuard no_grad;
    return decoder_loss(model, full, full_z).item();
  };
  return run_pretraining(model, model.decoder_parameters(), data.size(), options, rng, batch_loss, full_loss);
}

PretrainReport pretrain_full_vae(VaeModel& model, const PriorDataset& data, const PretrainOptions& options, Rng& rng) {
  if (data.empty()) throw std::invalid_argument("pretrain_full_vae: empty dataset");
  if (data.dim_w() != model.dim_w()) throw std::invalid_argument("pretrain_full_vae: proxy dimension mismatch");

  const std::vector<std::size_t> rows = all_rows(data.size());
  const Batch full = make_batch(data, rows);
  std::vector<double> eps(data.size() * model.dim_z());
  for (double& e : eps) e = rng.normal();
  const nn::Tensor eval_noise = nn::Tensor::from_values(data.size(), model.dim_z(), std::move(eps));

  auto batch_loss = [&](std::span<const std::size_t> r) {
    return elbo_transfer_loss(model, make_batch(data, r), rng);
  };
  auto full_loss = [&] {
    nn::NoGradGuard no_grad;
    return elbo_transfer_loss(model, full, eval_noise).item();
  };
  return run_pretraining(model, model.parameters(), data.size(), options, rng, batch_loss, full_loss);
}

}  // namespace tbandit::vae
