#include "gibbsrec/mathutil.hpp"

#include <algorithm>

namespace gibbsrec {

double normal_cdf(double x) {
  // Phi(x) = erfc(-x / sqrt 2) / 2, accurate in both tails.
  return 0.5 * std::erfc(-x * 0x1.6a09e667f3bcdp-1);
}

double ks_distance_to_standard_normal(std::vector<double> samples) {
  std::sort(samples.begin(), samples.end());
  const auto n = samples.size();
  double d = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double f = normal_cdf(samples[i]);
    const double lo = static_cast<double>(i) / static_cast<double>(n);
    const double hi = static_cast<double>(i + 1) / static_cast<double>(n);
    d = std::max(d, std::max(f - lo, hi - f));
  }
  return d;
}

}  // namespace gibbsrec
