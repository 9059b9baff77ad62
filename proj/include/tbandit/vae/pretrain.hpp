#pragma once

#include <cstddef>
#include <vector>

#include "tbandit/core/dataset.hpp"
#include "tbandit/core/rng.hpp"
#include "tbandit/vae/model.hpp"

namespace tbandit::vae {

struct PretrainOptions {
  std::size_t epochs = 200;
  double lr = 0.005;
  std::size_t batch_size = 32;
};

struct PretrainReport {
  /// Full-data loss before training, then after every accepted epoch.
  /// Nonincreasing by construction.
  std::vector<double> losses;
  std::size_t rejected_epochs = 0;
  double final_lr = 0.0;
};

/// Supervised fit of decoder_w and the reward decoders on the true contexts
/// in data. The encoder keeps its initialization.
///
/// After each epoch the full-data loss is re-evaluated; an epoch that raised
/// it is rolled back (parameters and Adam state) and the learning rate halved.
PretrainReport pretrain_decoders(VaeModel& model, const PriorDataset& data, const PretrainOptions& options, Rng& rng);

/// Fits encoder and decoders on (w, x, y) alone by minimizing the transfer
/// loss. The full-data loss used by the rollback guard is evaluated with one
/// fixed draw of reparameterization noise.
PretrainReport pretrain_full_vae(VaeModel& model, const PriorDataset& data, const PretrainOptions& options, Rng& rng);

}  // namespace tbandit::vae
