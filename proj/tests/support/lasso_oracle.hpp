#pragma once

// Exhaustive LASSO solver for small p: every sign pattern in {-1,0,+1}^p is
// tried, the stationarity system solved in long double, and candidates that
// satisfy the sign and subgradient conditions are certified by a duality gap.

#include <Eigen/Dense>

#include <cmath>
#include <limits>
#include <optional>
#include <vector>

namespace oracle {

using LMatrix = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>;
using LVector = Eigen::Matrix<long double, Eigen::Dynamic, 1>;

struct LassoSolution {
  LVector beta;
  long double intercept = 0;
  long double objective = 0;
  long double duality_gap = 0;
};

class BruteForceLasso {
 public:
  BruteForceLasso(const Eigen::MatrixXd& X, const Eigen::VectorXd& y) : n_(X.rows()), p_(X.cols()) {
    Xc_ = X.cast<long double>();
    x_mean_ = Xc_.colwise().mean().transpose();
    Xc_.rowwise() -= x_mean_.transpose();
    yc_ = y.cast<long double>();
    y_mean_ = yc_.mean();
    yc_.array() -= y_mean_;
    G_ = Xc_.transpose() * Xc_ / static_cast<long double>(n_);
    c_ = Xc_.transpose() * yc_ / static_cast<long double>(n_);
  }

  long double objective(const LVector& beta, long double lambda) const {
    const LVector r = yc_ - Xc_ * beta;
    return r.squaredNorm() / (2 * static_cast<long double>(n_)) + lambda * beta.cwiseAbs().sum();
  }

  // Gap between the primal objective and the dual objective at the scaled
  // residual; zero only at the optimum.
  long double duality_gap(const LVector& beta, long double lambda) const {
    const long double n = static_cast<long double>(n_);
    const LVector r = yc_ - Xc_ * beta;
    const long double corr = (Xc_.transpose() * r).cwiseAbs().maxCoeff();
    const long double scale = std::max(n * lambda, corr);
    const LVector theta = scale > 0 ? LVector(r / scale) : LVector(LVector::Zero(n_));
    const long double dual = (yc_.squaredNorm() - (yc_ - n * lambda * theta).squaredNorm()) / (2 * n);
    return objective(beta, lambda) - dual;
  }

  std::optional<LassoSolution> solve(long double lambda) const {
    std::optional<LassoSolution> best;
    std::vector<int> sign(static_cast<std::size_t>(p_), -1);
    const long double slack = 1e-12L * std::max<long double>(1, lambda);
    while (true) {
      std::vector<Eigen::Index> S;
      for (Eigen::Index j = 0; j < p_; ++j)
        if (sign[static_cast<std::size_t>(j)] != 0) S.push_back(j);
      LVector beta = LVector::Zero(p_);
      bool ok = true;
      if (!S.empty()) {
        const Eigen::Index k = static_cast<Eigen::Index>(S.size());
        LMatrix A(k, k);
        LVector b(k);
        for (Eigen::Index a = 0; a < k; ++a) {
          b(a) = c_(S[a]) - lambda * sign[static_cast<std::size_t>(S[a])];
          for (Eigen::Index c = 0; c < k; ++c) A(a, c) = G_(S[a], S[c]);
        }
        const Eigen::FullPivLU<LMatrix> lu(A);
        if (lu.rank() < k) {
          ok = false;
        } else {
          const LVector bs = lu.solve(b);
          for (Eigen::Index a = 0; a < k; ++a) {
            if (bs(a) * sign[static_cast<std::size_t>(S[a])] <= 0) ok = false;
            beta(S[a]) = bs(a);
          }
        }
      }
      if (ok) {
        const LVector grad = c_ - G_ * beta;
        for (Eigen::Index j = 0; j < p_ && ok; ++j)
          if (sign[static_cast<std::size_t>(j)] == 0 && std::abs(grad(j)) > lambda + slack) ok = false;
      }
      if (ok) {
        LassoSolution s;
        s.beta = beta;
        s.objective = objective(beta, lambda);
        s.duality_gap = duality_gap(beta, lambda);
        s.intercept = y_mean_ - x_mean_.dot(beta);
        if (!best || s.objective < best->objective) best = s;
      }
      // next pattern
      Eigen::Index j = 0;
      while (j < p_ && sign[static_cast<std::size_t>(j)] == 1) sign[static_cast<std::size_t>(j++)] = -1;
      if (j == p_) break;
      ++sign[static_cast<std::size_t>(j)];
    }
    return best;
  }

 private:
  Eigen::Index n_, p_;
  LMatrix Xc_;
  LVector x_mean_, yc_, c_;
  LMatrix G_;
  long double y_mean_ = 0;
};

}  // namespace oracle
