#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace tbandit {

using Arm = std::size_t;

/// One source-domain record (w, z, x, y).
struct PriorSample {
  std::vector<double> w;
  std::vector<double> z;
  Arm x = 0;
  double y = 0.0;
};

/// Source-domain transfer data. Every sample shares the same w/z dimensions.
class PriorDataset {
 public:
  PriorDataset() = default;
  explicit PriorDataset(std::string domain_tag) : domain_tag_(std::move(domain_tag)) {}

  /// Appends a record; throws std::invalid_argument on a dimension mismatch.
  void push_back(PriorSample sample);

  const std::vector<PriorSample>& samples() const { return samples_; }
  const PriorSample& operator[](std::size_t i) const { return samples_[i]; }
  std::size_t size() const { return samples_.size(); }
  bool empty() const { return samples_.empty(); }
  std::size_t dim_w() const { return samples_.empty() ? 0 : samples_.front().w.size(); }
  std::size_t dim_z() const { return samples_.empty() ? 0 : samples_.front().z.size(); }
  const std::string& domain_tag() const { return domain_tag_; }

  auto begin() const { return samples_.begin(); }
  auto end() const { return samples_.end(); }

 private:
  std::vector<PriorSample> samples_;
  std::string domain_tag_;
};

}  // namespace tbandit
