#include "polarity/distributions.hpp"
#include "polarity/types.hpp"

#include "support/distribution_oracle.hpp"

#include <doctest.h>

#include <cmath>

using namespace polarity;

TEST_CASE("Student t CDF agrees with the finite series") {
  for (int df = 1; df <= 30; ++df)
    for (double t = -8.0; t <= 8.0; t += 0.25) {
      const double ours = student_t_cdf(t, static_cast<double>(df));
      CHECK(std::abs(ours - static_cast<double>(oracle::t_cdf(t, df))) < 1e-10);
    }
}

TEST_CASE("Student t CDF agrees with Boost for fractional df") {
  for (double df : {0.5, 1.5, 2.7, 7.3, 19.9, 55.5, 300.0, 5000.0})
    for (double t = -6.0; t <= 6.0; t += 0.5)
      CHECK(std::abs(student_t_cdf(t, df) - static_cast<double>(oracle::t_cdf_boost(t, df))) < 1e-10);
}

TEST_CASE("Student t tails and symmetry") {
  CHECK(student_t_cdf(0.0, 5.0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(student_t_two_sided(2.0, 10.0) == doctest::Approx(2 * student_t_sf(2.0, 10.0)).epsilon(1e-14));
  CHECK(student_t_sf(1.3, 4.0) == doctest::Approx(student_t_cdf(-1.3, 4.0)).epsilon(1e-14));
  CHECK(student_t_sf(infinity(), 3.0) == 0.0);
  CHECK(student_t_cdf(-infinity(), 3.0) == 0.0);
  CHECK(student_t_two_sided(-infinity(), 3.0) == 0.0);
  // far tail keeps relative accuracy
  const double far = student_t_sf(40.0, 10.0);
  CHECK(far == doctest::Approx(static_cast<double>(oracle::t_sf(40.0L, 10))).epsilon(1e-9));
}

TEST_CASE("F distribution agrees with Boost") {
  for (double d1 : {1.0, 2.0, 3.0, 5.0, 12.0, 40.0})
    for (double d2 : {1.0, 4.0, 10.0, 30.0, 200.0})
      for (double f = 0.0; f <= 10.0; f += 0.25) {
        CHECK(std::abs(fisher_f_cdf(f, d1, d2) - static_cast<double>(oracle::f_cdf(f, d1, d2))) < 1e-10);
        CHECK(std::abs(fisher_f_sf(f, d1, d2) - static_cast<double>(oracle::f_sf(f, d1, d2))) < 1e-10);
      }
}

TEST_CASE("F with one numerator df is the squared t") {
  for (double df : {3.0, 8.0, 25.0})
    for (double t = 0.1; t < 5; t += 0.3)
      CHECK(fisher_f_sf(t * t, 1.0, df) == doctest::Approx(student_t_two_sided(t, df)).epsilon(1e-12));
}

TEST_CASE("regularized incomplete beta edge values") {
  CHECK(regularized_incomplete_beta(2.0, 3.0, 0.0) == 0.0);
  CHECK(regularized_incomplete_beta(2.0, 3.0, 1.0) == 1.0);
  // I_x(1, 1) = x
  CHECK(regularized_incomplete_beta(1.0, 1.0, 0.3) == doctest::Approx(0.3).epsilon(1e-14));
  // I_x(a, b) = 1 - I_{1-x}(b, a)
  CHECK(regularized_incomplete_beta(2.5, 4.0, 0.35) ==
        doctest::Approx(1 - regularized_incomplete_beta(4.0, 2.5, 0.65)).epsilon(1e-13));
}
