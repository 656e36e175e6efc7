#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

namespace testing {

/// Sample mean and standard error of the mean.
struct MeanSe {
  double mean = 0.0;
  double se = 0.0;
};

inline MeanSe mean_se(const std::vector<double>& xs) {
  const double n = static_cast<double>(xs.size());
  double m = 0.0;
  for (double x : xs) m += x;
  m /= n;
  double v = 0.0;
  for (double x : xs) v += (x - m) * (x - m);
  v /= n - 1.0;
  return {m, std::sqrt(v / n)};
}

/// Batch means for autocorrelated sequences.
inline MeanSe batch_mean_se(const std::vector<double>& xs, std::size_t batches = 100) {
  const std::size_t len = xs.size() / batches;
  std::vector<double> means;
  for (std::size_t b = 0; b < batches; ++b) {
    double s = 0.0;
    for (std::size_t i = b * len; i < (b + 1) * len; ++i) s += xs[i];
    means.push_back(s / static_cast<double>(len));
  }
  return mean_se(means);
}

/// Standard normal CDF.
inline double phi(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

}  // namespace testing
