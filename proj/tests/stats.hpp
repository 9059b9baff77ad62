#pragma once

#include <cmath>
#include <span>

namespace test_stats {

struct MeanSe {
  double mean = 0.0;
  double se = 0.0;
};

inline MeanSe mean_se(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += v;
  const double n = static_cast<double>(x.size());
  const double m = s / n;
  double ss = 0.0;
  for (double v : x) ss += (v - m) * (v - m);
  return {m, std::sqrt(ss / (n - 1.0) / n)};
}

}  // namespace test_stats
