#include "polarity/errors.hpp"
#include "polarity/inference.hpp"

#include "support/ols_oracle.hpp"
#include "support/random_design.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace polarity;
using synthetic::random_design;

TEST_CASE("perfect fit gives zero standard errors and infinite t") {
  MatrixXd X(6, 2);
  X << 1, 0, 2, 1, 3, 0, 4, 1, 5, 0, 6, 1;
  VectorXd y = 1.0 + 2.0 * X.col(0).array() - 3.0 * X.col(1).array();
  const auto res = post_lasso(X, y, {0, 1});
  CHECK(res.ols_coefficients(0) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(res.ols_coefficients(1) == doctest::Approx(-3.0).epsilon(1e-12));
  CHECK(res.intercept == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(res.standard_errors(0) == 0.0);
  CHECK(res.t_statistics(0) == infinity());
  CHECK(res.t_statistics(1) == -infinity());
  CHECK(res.r2 == 1.0);
}

TEST_CASE("standard errors match the normal-equations oracle") {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 30; ++trial) {
    const Index p = 2 + trial % 10;
    const auto d = random_design(rng, 60 + trial, p, 1.0);
    std::vector<Index> support;
    for (Index j = 0; j < p; j += 1 + trial % 2) support.push_back(j);
    const auto fit = post_lasso(d.X, d.y, support);
    const auto ref = oracle::normal_equations_ols(d.X, d.y, support);
    REQUIRE(fit.support == support);
    for (std::size_t c = 0; c < support.size(); ++c) {
      const auto i = static_cast<Index>(c);
      CHECK(std::abs(fit.ols_coefficients(i) - static_cast<double>(ref.coefficients[c])) < 1e-10);
      CHECK(std::abs(fit.standard_errors(i) - static_cast<double>(ref.standard_errors[c])) < 1e-8);
    }
    CHECK(std::abs(fit.intercept - static_cast<double>(ref.intercept)) < 1e-10);
    CHECK(std::abs(fit.adjusted_r2 - static_cast<double>(ref.adjusted_r2)) < 1e-10);
  }
}

TEST_CASE("adding a pure-noise regressor can lower adjusted R2 but never R2") {
  std::mt19937_64 rng(22);
  std::normal_distribution<double> z(0, 1);
  int lowered = 0;
  double decrease = 0;
  for (int trial = 0; trial < 50; ++trial) {
    auto d = random_design(rng, 40, 3, 1.0);
    MatrixXd X(40, 4);
    X.leftCols(3) = d.X;
    for (Index i = 0; i < 40; ++i) X(i, 3) = z(rng);
    const auto small = ols_fit(X, d.y, {0, 1, 2});
    const auto big = ols_fit(X, d.y, {0, 1, 2, 3});
    CHECK(big.r2 >= small.r2 - 1e-12);
    if (big.adjusted_r2 < small.adjusted_r2) ++lowered;
    decrease += small.adjusted_r2 - big.adjusted_r2;
  }
  CHECK(lowered > 25);
  CHECK(decrease / 50 > 0);
}

TEST_CASE("rescaling a column rescales its coefficient and keeps t") {
  std::mt19937_64 rng(23);
  const auto d = random_design(rng, 50, 4, 1.0);
  MatrixXd Xs = d.X;
  Xs.col(2) *= 7.5;
  const auto a = post_lasso(d.X, d.y, {0, 1, 2, 3});
  const auto b = post_lasso(Xs, d.y, {0, 1, 2, 3});
  CHECK(b.ols_coefficients(2) == doctest::Approx(a.ols_coefficients(2) / 7.5).epsilon(1e-10));
  for (Index j = 0; j < 4; ++j) CHECK(b.t_statistics(j) == doctest::Approx(a.t_statistics(j)).epsilon(1e-9));
}

TEST_CASE("dependent columns are dropped, keeping the lowest index") {
  std::mt19937_64 rng(24);
  const auto d = random_design(rng, 30, 3, 1.0);
  MatrixXd X(30, 4);
  X.leftCols(3) = d.X;
  X.col(3) = 2.0 * d.X.col(0) - d.X.col(1);
  const auto fit = post_lasso(X, d.y, {3, 0, 1, 2});
  CHECK(fit.support == std::vector<Index>{0, 1, 2});
  CHECK(fit.dropped == std::vector<Index>{3});

  MatrixXd Y(30, 2);
  Y.col(0) = d.X.col(0);
  Y.col(1) = d.X.col(0);
  const auto dup = post_lasso(Y, d.y, {1, 0});
  CHECK(dup.support == std::vector<Index>{0});
  CHECK(dup.dropped == std::vector<Index>{1});
}

TEST_CASE("OLS needs residual degrees of freedom") {
  MatrixXd X = MatrixXd::Random(3, 3);
  VectorXd y = VectorXd::Random(3);
  CHECK_THROWS_AS(ols_fit(X, y, {0, 1, 2}), EstimationError);
  CHECK_THROWS_AS(ols_fit(X, y, {0, 1}), EstimationError);
  CHECK_THROWS_AS(post_lasso(X, y, {}), EstimationError);
}

TEST_CASE("VIF examples") {
  SUBCASE("orthogonal columns") {
    MatrixXd X(4, 2);
    X << 1, 1, -1, 1, 1, -1, -1, -1;
    const auto r = vif(X);
    CHECK(r.vif(0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(r.vif(1) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(r.count_exceeding_threshold == 0);
  }
  SUBCASE("correlation 0.9") {
    // Columns built to have sample correlation exactly 0.9.
    std::mt19937_64 rng(25);
    std::normal_distribution<double> z(0, 1);
    MatrixXd E(200, 2);
    for (Index i = 0; i < 200; ++i) E.row(i) << z(rng), z(rng);
    E = synthetic::standardize_columns(E);
    // orthogonalize the second column against the first
    E.col(1) -= E.col(0) * (E.col(0).dot(E.col(1)) / E.col(0).squaredNorm());
    E = synthetic::standardize_columns(E);
    MatrixXd X(200, 2);
    X.col(0) = E.col(0);
    X.col(1) = 0.9 * E.col(0) + std::sqrt(1 - 0.81) * E.col(1);
    const auto r = vif(X);
    CHECK(r.vif(0) == doctest::Approx(1 / (1 - 0.81)).epsilon(1e-3));
    CHECK(r.vif(0) == doctest::Approx(5.263).epsilon(1e-3));
    CHECK(r.count_exceeding_threshold == 2);
  }
  SUBCASE("duplicated column") {
    std::mt19937_64 rng(26);
    const auto d = random_design(rng, 20, 2);
    MatrixXd X(20, 3);
    X << d.X, d.X.col(0);
    const auto r = vif(X);
    CHECK(std::isinf(r.vif(0)));
    CHECK(std::isinf(r.vif(2)));
    CHECK(std::isfinite(r.vif(1)));
  }
  SUBCASE("more terms than documents") {
    MatrixXd X = MatrixXd::Random(4, 4);
    CHECK_THROWS_AS(vif(X), EstimationError);
  }
}

TEST_CASE("VIF matches the auxiliary-regression definition") {
  std::mt19937_64 rng(27);
  for (int trial = 0; trial < 10; ++trial) {
    const auto d = random_design(rng, 50, 5);
    const auto r = vif(d.X);
    for (Index j = 0; j < 5; ++j) {
      std::vector<Index> others;
      for (Index k = 0; k < 5; ++k)
        if (k != j) others.push_back(k);
      const auto aux = oracle::normal_equations_ols(d.X, d.X.col(j), others);
      CHECK(r.vif(j) == doctest::Approx(static_cast<double>(1 / (1 - aux.r2))).epsilon(1e-9));
      CHECK(r.vif(j) >= 1.0 - 1e-12);
    }
  }
}
