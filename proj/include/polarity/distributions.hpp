#pragma once

// Student-t and F distribution functions through the regularized incomplete
// beta function I_x(a, b), evaluated with the modified Lentz continued
// fraction.

#include <cmath>
#include <limits>
#include <stdexcept>

namespace polarity {

namespace detail {

// Continued fraction for I_x(a, b) * a * B(a, b) / (x^a (1-x)^b); converges
// quickly for x < (a + 1) / (a + b + 2).
template <typename Scalar>
Scalar beta_continued_fraction(Scalar a, Scalar b, Scalar x) {
  const Scalar eps = std::numeric_limits<Scalar>::epsilon();
  const Scalar tiny = std::numeric_limits<Scalar>::min() / eps;
  const Scalar qab = a + b;
  const Scalar qap = a + 1;
  const Scalar qam = a - 1;
  Scalar c = 1;
  Scalar d = 1 - qab * x / qap;
  if (std::abs(d) < tiny) d = tiny;
  d = 1 / d;
  Scalar h = d;
  for (int m = 1; m <= 100000; ++m) {
    const Scalar m2 = 2 * static_cast<Scalar>(m);
    Scalar aa = static_cast<Scalar>(m) * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1 + aa * d;
    if (std::abs(d) < tiny) d = tiny;
    c = 1 + aa / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1 + aa * d;
    if (std::abs(d) < tiny) d = tiny;
    c = 1 + aa / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1 / d;
    const Scalar delta = d * c;
    h *= delta;
    if (std::abs(delta - 1) <= eps) return h;
  }
  throw std::runtime_error("incomplete beta continued fraction did not converge");
}

}  // namespace detail

/// I_x(a, b) with the complement 1 - x passed separately to avoid
/// cancellation when x is close to 1.
template <typename Scalar>
Scalar regularized_incomplete_beta(Scalar a, Scalar b, Scalar x, Scalar one_minus_x) {
  if (!(a > 0) || !(b > 0)) throw std::domain_error("incomplete beta needs a, b > 0");
  if (x <= 0) return 0;
  if (one_minus_x <= 0) return 1;
  const Scalar log_front = a * std::log(x) + b * std::log(one_minus_x) - std::lgamma(a) - std::lgamma(b) +
                           std::lgamma(a + b);
  const Scalar front = std::exp(log_front);
  if (x < (a + 1) / (a + b + 2)) return front * detail::beta_continued_fraction(a, b, x) / a;
  return 1 - front * detail::beta_continued_fraction(b, a, one_minus_x) / b;
}

template <typename Scalar>
Scalar regularized_incomplete_beta(Scalar a, Scalar b, Scalar x) {
  return regularized_incomplete_beta(a, b, x, 1 - x);
}

/// P(T > t) for Student's t with `df` degrees of freedom.
template <typename Scalar>
Scalar student_t_sf(Scalar t, Scalar df) {
  if (std::isnan(t)) return t;
  if (std::isinf(t)) return t > 0 ? Scalar(0) : Scalar(1);
  const Scalar t2 = t * t;
  const Scalar x = df / (df + t2);
  const Scalar half_tail = regularized_incomplete_beta(df / 2, Scalar(0.5), x, t2 / (df + t2)) / 2;
  return t > 0 ? half_tail : 1 - half_tail;
}

template <typename Scalar>
Scalar student_t_cdf(Scalar t, Scalar df) {
  if (std::isnan(t)) return t;
  return student_t_sf(-t, df);
}

/// P(|T| > |t|).
template <typename Scalar>
Scalar student_t_two_sided(Scalar t, Scalar df) {
  if (std::isnan(t)) return t;
  if (std::isinf(t)) return 0;
  const Scalar t2 = t * t;
  return regularized_incomplete_beta(df / 2, Scalar(0.5), df / (df + t2), t2 / (df + t2));
}

template <typename Scalar>
Scalar fisher_f_cdf(Scalar f, Scalar df1, Scalar df2) {
  if (std::isnan(f)) return f;
  if (f <= 0) return 0;
  if (std::isinf(f)) return 1;
  const Scalar denom = df1 * f + df2;
  return regularized_incomplete_beta(df1 / 2, df2 / 2, df1 * f / denom, df2 / denom);
}

/// P(F > f).
template <typename Scalar>
Scalar fisher_f_sf(Scalar f, Scalar df1, Scalar df2) {
  if (std::isnan(f)) return f;
  if (f <= 0) return 1;
  if (std::isinf(f)) return 0;
  const Scalar denom = df1 * f + df2;
  return regularized_incomplete_beta(df2 / 2, df1 / 2, df2 / denom, df1 * f / denom);
}

}  // namespace polarity
