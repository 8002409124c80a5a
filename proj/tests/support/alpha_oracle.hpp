#pragma once

// Krippendorff alpha for two raters by direct pair counting: observed
// disagreement is the mean difference within units, expected disagreement
// the mean difference over all ordered pairs of pooled values.

#include <cstddef>
#include <vector>

namespace oracle {

inline long double alpha_by_pairs(const std::vector<double>& a, const std::vector<double>& b, bool interval) {
  const auto delta = [interval](long double x, long double y) -> long double {
    if (interval) return (x - y) * (x - y);
    return x == y ? 0.0L : 1.0L;
  };
  long double d_o = 0;
  for (std::size_t u = 0; u < a.size(); ++u) d_o += delta(a[u], b[u]);
  d_o /= static_cast<long double>(a.size());

  std::vector<double> pooled(a);
  pooled.insert(pooled.end(), b.begin(), b.end());
  long double d_e = 0;
  for (std::size_t i = 0; i < pooled.size(); ++i)
    for (std::size_t j = 0; j < pooled.size(); ++j)
      if (i != j) d_e += delta(pooled[i], pooled[j]);
  d_e /= static_cast<long double>(pooled.size() * (pooled.size() - 1));
  return 1 - d_o / d_e;
}

}  // namespace oracle
