#pragma once

// Ordinary least squares on a column subset (Post-LASSO refit), with
// deterministic handling of linearly dependent columns, plus variance
// inflation factors.

#include "polarity/errors.hpp"
#include "polarity/types.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

namespace polarity {

template <typename Scalar>
struct OlsFit {
  std::vector<Index> columns;  // columns kept, in the order given
  std::vector<Index> dropped;  // linearly dependent on earlier columns
  Scalar intercept = 0;
  Vector<Scalar> coefficients;
  Vector<Scalar> standard_errors;
  Scalar rss = 0;
  Scalar tss = 0;
  Scalar r2 = 0;
  Scalar adjusted_r2 = 0;
  Scalar residual_variance = 0;
  Index df_residual = 0;
};

template <typename Scalar>
struct PostLassoResult {
  std::vector<Index> support;
  std::vector<Index> dropped;
  Scalar intercept = 0;
  Vector<Scalar> ols_coefficients;
  Vector<Scalar> standard_errors;
  Vector<Scalar> t_statistics;
  Scalar r2 = 0;
  Scalar adjusted_r2 = 0;
  Scalar residual_variance = 0;
};

template <typename Scalar>
struct VifReport {
  std::vector<Index> terms;
  Vector<Scalar> vif;
  Index count_exceeding_threshold = 0;
  Scalar threshold = 4;
};

namespace detail {

// Keeps columns in the given order, dropping any whose centered residual
// after projecting out the previously kept columns is negligible.
template <typename Scalar>
std::vector<Index> independent_columns(const Matrix<Scalar>& centered, const std::vector<Index>& order,
                                       std::vector<Index>& dropped) {
  const Scalar tol = std::sqrt(std::numeric_limits<Scalar>::epsilon()) * Scalar(1e-2);
  std::vector<Index> kept;
  Matrix<Scalar> basis(centered.rows(), static_cast<Index>(order.size()));
  Index k = 0;
  for (std::size_t c = 0; c < order.size(); ++c) {
    Vector<Scalar> v = centered.col(static_cast<Index>(c));
    const Scalar norm0 = v.norm();
    if (norm0 > 0) {
      for (int pass = 0; pass < 2; ++pass)
        if (k > 0) v.noalias() -= basis.leftCols(k) * (basis.leftCols(k).transpose() * v);
    }
    const Scalar norm = v.norm();
    if (norm0 == 0 || norm <= tol * norm0) {
      dropped.push_back(order[c]);
      continue;
    }
    basis.col(k++) = v / norm;
    kept.push_back(order[c]);
  }
  return kept;
}

template <typename Scalar>
Scalar relative_zero() {
  const Scalar e = 64 * std::numeric_limits<Scalar>::epsilon();
  return e * e;
}

}  // namespace detail

/// OLS of y on an intercept and X[:, columns]. Dependent columns are dropped
/// lowest-index-first-kept and reported.
template <typename DerivedX, typename DerivedY>
OlsFit<typename DerivedX::Scalar> ols_fit(const Eigen::MatrixBase<DerivedX>& X, const Eigen::MatrixBase<DerivedY>& y,
                                          const std::vector<Index>& columns) {
  using Scalar = typename DerivedX::Scalar;
  const Index n = X.rows();
  if (y.size() != n) throw InputError("ols: X and y have different numbers of rows");
  if (static_cast<Index>(columns.size()) >= n)
    throw EstimationError("ols: " + std::to_string(columns.size()) + " regressors for " + std::to_string(n) +
                          " observations; least squares is undefined");

  std::vector<Index> order = columns;
  std::sort(order.begin(), order.end());
  order.erase(std::unique(order.begin(), order.end()), order.end());

  const Vector<Scalar> yv = y.template cast<Scalar>();
  const Scalar y_mean = yv.mean();
  const Vector<Scalar> yc = yv.array() - y_mean;

  Matrix<Scalar> sub(n, static_cast<Index>(order.size()));
  for (std::size_t c = 0; c < order.size(); ++c) sub.col(static_cast<Index>(c)) = X.col(order[c]).template cast<Scalar>();
  const Vector<Scalar> x_mean_all = sub.colwise().mean().transpose();
  sub.rowwise() -= x_mean_all.transpose();

  OlsFit<Scalar> fit;
  fit.columns = detail::independent_columns(sub, order, fit.dropped);
  const Index k = static_cast<Index>(fit.columns.size());
  fit.df_residual = n - k - 1;
  if (fit.df_residual < 1) throw EstimationError("ols: no residual degrees of freedom");

  Matrix<Scalar> Xc(n, k);
  Vector<Scalar> x_mean(k);
  for (Index c = 0, s = 0; c < static_cast<Index>(order.size()); ++c) {
    if (s < k && order[static_cast<std::size_t>(c)] == fit.columns[static_cast<std::size_t>(s)]) {
      Xc.col(s) = sub.col(c);
      x_mean(s) = x_mean_all(c);
      ++s;
    }
  }

  fit.tss = yc.squaredNorm();
  Vector<Scalar> resid = yc;
  fit.coefficients = Vector<Scalar>::Zero(k);
  fit.standard_errors = Vector<Scalar>::Zero(k);
  Matrix<Scalar> r_inv;
  if (k > 0) {
    const Eigen::HouseholderQR<Matrix<Scalar>> qr(Xc);
    fit.coefficients = qr.solve(yc);
    resid.noalias() -= Xc * fit.coefficients;
    const Matrix<Scalar> R = qr.matrixQR().topLeftCorner(k, k).template triangularView<Eigen::Upper>();
    r_inv = R.template triangularView<Eigen::Upper>().solve(Matrix<Scalar>::Identity(k, k));
  }
  fit.rss = resid.squaredNorm();
  if (fit.rss <= detail::relative_zero<Scalar>() * fit.tss) fit.rss = 0;
  fit.intercept = y_mean - (k > 0 ? x_mean.dot(fit.coefficients) : Scalar(0));
  fit.residual_variance = fit.rss / static_cast<Scalar>(fit.df_residual);
  if (k > 0) fit.standard_errors = (r_inv.rowwise().squaredNorm() * fit.residual_variance).cwiseSqrt();
  fit.r2 = fit.tss > 0 ? 1 - fit.rss / fit.tss : Scalar(1);
  fit.adjusted_r2 = 1 - (1 - fit.r2) * static_cast<Scalar>(n - 1) / static_cast<Scalar>(fit.df_residual);
  return fit;
}

/// OLS refit on the LASSO support: coefficients, homoskedastic standard
/// errors and t-statistics (+/-inf when the standard error is zero).
template <typename DerivedX, typename DerivedY>
PostLassoResult<typename DerivedX::Scalar> post_lasso(const Eigen::MatrixBase<DerivedX>& X,
                                                      const Eigen::MatrixBase<DerivedY>& y,
                                                      const std::vector<Index>& support) {
  using Scalar = typename DerivedX::Scalar;
  if (support.empty()) throw EstimationError("post-lasso: empty support");
  const auto ols = ols_fit(X, y, support);
  PostLassoResult<Scalar> out;
  out.support = ols.columns;
  out.dropped = ols.dropped;
  out.intercept = ols.intercept;
  out.ols_coefficients = ols.coefficients;
  out.standard_errors = ols.standard_errors;
  out.t_statistics.resize(ols.coefficients.size());
  for (Index j = 0; j < ols.coefficients.size(); ++j) {
    const Scalar b = ols.coefficients(j);
    const Scalar se = ols.standard_errors(j);
    if (se > 0)
      out.t_statistics(j) = b / se;
    else
      out.t_statistics(j) = b == 0 ? std::numeric_limits<Scalar>::quiet_NaN()
                                   : (b > 0 ? 1 : -1) * std::numeric_limits<Scalar>::infinity();
  }
  out.r2 = ols.r2;
  out.adjusted_r2 = ols.adjusted_r2;
  out.residual_variance = ols.residual_variance;
  return out;
}

/// VIF_j = 1 / (1 - R_j^2), regressing column j on the other columns in
/// scope (with intercept). Columns in the span of the others get +inf.
template <typename DerivedX>
VifReport<typename DerivedX::Scalar> vif(const Eigen::MatrixBase<DerivedX>& X, std::vector<Index> subset = {},
                                         typename DerivedX::Scalar threshold = 4) {
  using Scalar = typename DerivedX::Scalar;
  if (subset.empty())
    for (Index j = 0; j < X.cols(); ++j) subset.push_back(j);
  const Index p = static_cast<Index>(subset.size());
  const Index n = X.rows();
  if (p < 2) throw EstimationError("vif: needs at least 2 terms");
  if (p >= n)
    throw EstimationError("vif: " + std::to_string(p) + " terms for " + std::to_string(n) +
                          " documents; compute VIF on a subset of fewer terms than documents");

  Matrix<Scalar> Xc(n, p);
  for (Index c = 0; c < p; ++c) Xc.col(c) = X.col(subset[static_cast<std::size_t>(c)]).template cast<Scalar>();
  Xc.rowwise() -= Xc.colwise().mean();
  const Vector<Scalar> norms = Xc.colwise().norm().transpose();
  for (Index c = 0; c < p; ++c)
    if (norms(c) > 0) Xc.col(c) /= norms(c);
  const Matrix<Scalar> corr = Xc.transpose() * Xc;

  // corr = V diag(e) V'; dependent directions have e ~ 0.
  const Eigen::SelfAdjointEigenSolver<Matrix<Scalar>> eig(corr);
  const Vector<Scalar>& e = eig.eigenvalues();
  const Matrix<Scalar>& V = eig.eigenvectors();
  const Scalar cutoff = e.cwiseAbs().maxCoeff() * static_cast<Scalar>(p) * std::numeric_limits<Scalar>::epsilon() * 16;

  VifReport<Scalar> report;
  report.terms = subset;
  report.threshold = threshold;
  report.vif.resize(p);
  for (Index c = 0; c < p; ++c) {
    if (norms(c) == 0) {
      report.vif(c) = std::numeric_limits<Scalar>::infinity();
      continue;
    }
    bool dependent = false;
    Scalar pinv_diag = 0;
    for (Index k = 0; k < p; ++k) {
      const Scalar v = V(c, k);
      if (e(k) <= cutoff) {
        if (std::abs(v) > Scalar(1e-6)) dependent = true;
      } else {
        pinv_diag += v * v / e(k);
      }
    }
    report.vif(c) = dependent ? std::numeric_limits<Scalar>::infinity() : pinv_diag * corr(c, c);
  }
  for (Index c = 0; c < p; ++c)
    if (report.vif(c) > threshold) ++report.count_exceeding_threshold;
  return report;
}

}  // namespace polarity
