#pragma once

#include "support/synthetic.hpp"

#include <Eigen/Dense>

#include <random>

namespace synthetic {

struct Design {
  Eigen::MatrixXd X;
  Eigen::VectorXd y;
};

// Standardized design with mild column correlation and a sparse linear
// response, also standardized.
inline Design random_design(std::mt19937_64& rng, Eigen::Index n, Eigen::Index p, double noise = 0.5) {
  std::normal_distribution<double> z(0.0, 1.0);
  Eigen::MatrixXd X(n, p);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double common = z(rng);
    for (Eigen::Index j = 0; j < p; ++j) X(i, j) = z(rng) + 0.3 * common;
  }
  X = standardize_columns(X);
  Eigen::VectorXd beta = Eigen::VectorXd::Zero(p);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (Eigen::Index j = 0; j < p; ++j)
    if (j % 2 == 0) beta(j) = u(rng);
  Eigen::VectorXd y = X * beta;
  for (Eigen::Index i = 0; i < n; ++i) y(i) += noise * z(rng);
  Eigen::MatrixXd ym(n, 1);
  ym.col(0) = y;
  return {X, standardize_columns(ym).col(0)};
}

}  // namespace synthetic
