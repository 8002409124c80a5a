#pragma once

// OLS through the normal equations of the uncentered design [1, X_S],
// evaluated in long double.

#include <Eigen/Dense>

#include <vector>

namespace oracle {

struct OlsSolution {
  long double intercept = 0;
  std::vector<long double> coefficients;
  std::vector<long double> standard_errors;
  long double rss = 0;
  long double r2 = 0;
  long double adjusted_r2 = 0;
};

inline OlsSolution normal_equations_ols(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                                        const std::vector<Eigen::Index>& columns) {
  using LMatrix = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>;
  using LVector = Eigen::Matrix<long double, Eigen::Dynamic, 1>;
  const Eigen::Index n = X.rows();
  const Eigen::Index k = static_cast<Eigen::Index>(columns.size());
  LMatrix A(n, k + 1);
  A.col(0).setOnes();
  for (Eigen::Index c = 0; c < k; ++c) A.col(c + 1) = X.col(columns[static_cast<std::size_t>(c)]).cast<long double>();
  const LVector yl = y.cast<long double>();
  const LMatrix AtA = A.transpose() * A;
  const LMatrix inv = AtA.fullPivLu().inverse();
  const LVector beta = inv * (A.transpose() * yl);
  const LVector r = yl - A * beta;

  OlsSolution s;
  s.rss = r.squaredNorm();
  const long double tss = (yl.array() - yl.mean()).matrix().squaredNorm();
  const long double df = static_cast<long double>(n - k - 1);
  const long double sigma2 = s.rss / df;
  s.intercept = beta(0);
  for (Eigen::Index c = 0; c < k; ++c) {
    s.coefficients.push_back(beta(c + 1));
    s.standard_errors.push_back(std::sqrt(sigma2 * inv(c + 1, c + 1)));
  }
  s.r2 = 1 - s.rss / tss;
  s.adjusted_r2 = 1 - (1 - s.r2) * static_cast<long double>(n - 1) / df;
  return s;
}

}  // namespace oracle
