#pragma once

// Student-t CDF for integer degrees of freedom from the finite
// trigonometric series (Abramowitz & Stegun 26.7.3/26.7.4), and F
// probabilities from Boost.Math, both in long double.

#include <boost/math/distributions/fisher_f.hpp>
#include <boost/math/distributions/students_t.hpp>

#include <cmath>

namespace oracle {

// P(|T| <= t) for t >= 0.
inline long double t_central_probability(long double t, int df) {
  const long double pi = 3.141592653589793238462643383279502884L;
  const long double theta = std::atan(t / std::sqrt(static_cast<long double>(df)));
  const long double s = std::sin(theta), c = std::cos(theta);
  if (df == 1) return 2 * theta / pi;
  long double sum = 0;
  if (df % 2 == 1) {
    long double term = c;
    sum = term;
    for (int k = 3; k <= df - 2; k += 2) {
      term *= c * c * static_cast<long double>(k - 1) / static_cast<long double>(k);
      sum += term;
    }
    return 2 / pi * (theta + s * sum);
  }
  long double term = 1;
  sum = 1;
  for (int k = 2; k <= df - 2; k += 2) {
    term *= c * c * static_cast<long double>(k - 1) / static_cast<long double>(k);
    sum += term;
  }
  return s * sum;
}

inline long double t_cdf(long double t, int df) {
  const long double a = t_central_probability(std::abs(t), df);
  return t >= 0 ? 0.5L + a / 2 : 0.5L - a / 2;
}

inline long double t_sf(long double t, int df) { return t_cdf(-t, df); }

inline long double t_cdf_boost(long double t, long double df) {
  return boost::math::cdf(boost::math::students_t_distribution<long double>(df), t);
}

inline long double f_cdf(long double f, long double d1, long double d2) {
  return boost::math::cdf(boost::math::fisher_f_distribution<long double>(d1, d2), f);
}

inline long double f_sf(long double f, long double d1, long double d2) {
  return boost::math::cdf(boost::math::complement(boost::math::fisher_f_distribution<long double>(d1, d2), f));
}

}  // namespace oracle
