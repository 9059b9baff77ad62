#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "tbandit/core/rng.hpp"
#include "tbandit/env/domain.hpp"
#include "tbandit/vae/model.hpp"

namespace tbandit::vae {

/// Expected target-domain gradient of the log-joint with respect to the
/// proxy-mechanism parameters theta_1, under the two-decoder factorization
/// P(Z) P(W|Z) P(Y|Z,X) P(X|Z) and the autoencoder factorization
/// q(Z|W) P(W|Z) P(Y|Z,X) P(X|Z).
struct ProbeResult {
  std::vector<double> two_decoder_mean;
  std::vector<double> two_decoder_se;
  std::vector<double> autoencoder_mean;
  std::vector<double> autoencoder_se;
  /// ||mean gradient|| / parameter count.
  double g_two_decoder = 0.0;
  double g_autoencoder = 0.0;
  std::size_t n_samples = 0;

  /// Every component of the two-decoder mean lies within k standard errors of 0.
  bool two_decoder_consistent_with_zero(double k = 3.0) const;
  bool autoencoder_consistent_with_zero(double k = 3.0) const;
};

/// Binary model with theta_1 = (p(w=1|z=0), p(w=1|z=1)). The autoencoder's
/// implicit posterior is p(w|z) P(z) / P(w) with P(w) taken under the source
/// context marginal c_source, so its score is 2 d log p(w|z) - d log P(w).
ProbeResult corollary1_probe_binary(const std::array<double, 2>& cpt_w, double c_source, double c_target,
                                    std::size_t n_samples, Rng& rng);

/// Neural version: the two-decoder score differentiates log p(w|z) of
/// `decoders` at the true target context; the autoencoder score
/// differentiates log p(w|z_hat) of `autoencoder` at its encoder mean.
ProbeResult corollary1_probe_neural(const VaeModel& decoders, const VaeModel& autoencoder,
                                    const env::DomainSpec& target, std::size_t n_samples, Rng& rng);

}  // namespace tbandit::vae
