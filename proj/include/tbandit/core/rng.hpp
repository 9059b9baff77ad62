#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <string_view>

namespace tbandit {

/// Counter-based Philox4x32-10 stream.
///
/// The 64-bit seed is the Philox key; the 64-bit stream id occupies the upper
/// half of the 128-bit counter and the block index the lower half, so two
/// streams with different ids never produce overlapping blocks. All
/// distribution transforms below are written out explicitly (no <random>
/// distributions) so sequences are identical on every platform.
class Rng {
 public:
  using result_type = std::uint64_t;

  Rng(std::uint64_t seed, std::uint64_t stream_id);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }
  result_type operator()() { return next_u64(); }

  std::uint64_t next_u64();

  /// Uniform on [0, 1) with 53 bits of resolution.
  double uniform();
  /// Uniform on (0, 1); never returns 0.
  double uniform_open();
  /// Standard normal via Box-Muller; consumes exactly two 64-bit draws.
  double normal();
  double normal(double mean, double stddev) { return mean + stddev * normal(); }
  bool bernoulli(double p);
  /// Uniform integer in [0, n); n must be positive.
  std::size_t uniform_index(std::size_t n);
  /// Gamma(shape, 1) via Marsaglia-Tsang.
  double gamma(double shape);
  /// Beta(a, b). Beta(1, 1) consumes and returns a single uniform draw.
  double beta(double a, double b);

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_id() const { return stream_; }

 private:
  void refill();

  std::uint64_t seed_;
  std::uint64_t stream_;
  std::uint64_t block_ = 0;
  std::array<std::uint64_t, 2> buffer_{};
  int buffered_ = 0;
};

inline Rng make_rng(std::uint64_t seed, std::uint64_t stream_id) { return Rng(seed, stream_id); }

/// Stable 64-bit FNV-1a hash; used to key streams by agent name.
std::uint64_t stable_hash(std::string_view text);

/// Mixes a base stream id with a purpose tag into a new stream id.
std::uint64_t derive_stream(std::uint64_t base, std::uint64_t purpose);

/// Purpose tags for the stochastic consumers of one run.
namespace stream {
inline constexpr std::uint64_t kPrior = 1;
inline constexpr std::uint64_t kContext = 2;
inline constexpr std::uint64_t kReward = 3;
inline constexpr std::uint64_t kExploration = 4;
inline constexpr std::uint64_t kInit = 5;
inline constexpr std::uint64_t kPretrain = 6;
inline constexpr std::uint64_t kMinibatch = 7;
inline constexpr std::uint64_t kHeldOut = 8;
inline constexpr std::uint64_t kGenerator = 9;
inline constexpr std::uint64_t kProbe = 10;
}  // namespace stream

}  // namespace tbandit
