#pragma once

// L1-penalized least squares by cyclic coordinate descent.
//
// Every routine solves the penalty form
//
//   min_{b0, b}  1/(2n) * ||y - b0 - X b||^2 + lambda * ||b||_1
//
// with an unpenalized intercept. The solver centers X and y internally and
// keeps the gradient X_c^T r / n up to date through lazily cached Gram
// columns, so each coordinate update costs O(p) instead of O(n).

#include "polarity/errors.hpp"
#include "polarity/types.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

namespace polarity {

enum class SelectionRule { min, one_se };

inline std::string_view to_string(SelectionRule r) { return r == SelectionRule::one_se ? "one_se" : "min"; }

inline SelectionRule selection_rule_from_string(std::string_view s) {
  if (s == "min") return SelectionRule::min;
  if (s == "one_se") return SelectionRule::one_se;
  throw ConfigError("unknown selection rule '" + std::string(s) + "'");
}

struct LassoOptions {
  double tol = 1e-7;      // max coefficient change in a full cycle
  int max_iter = 10000;   // coordinate cycles per lambda
};

template <typename Scalar>
struct LassoFit {
  Scalar intercept = 0;
  Vector<Scalar> coefficients;
  Scalar lambda = 0;
  std::vector<Index> active_set;
  int iterations = 0;
  bool converged = false;
  Scalar objective_value = 0;
};

template <typename Scalar>
struct LassoPath {
  std::vector<Scalar> lambdas;  // strictly decreasing
  std::vector<LassoFit<Scalar>> fits;  // refit on all observations
  std::vector<Scalar> cv_mean_error;
  std::vector<Scalar> cv_se_error;
  Matrix<Scalar> cv_fold_errors;  // folds x lambdas
  Index n_folds = 0;
  Index selected_index = 0;
  Scalar selected_lambda = 0;
  SelectionRule selection_rule = SelectionRule::min;

  const LassoFit<Scalar>& selected() const { return fits[static_cast<std::size_t>(selected_index)]; }
};

template <typename Scalar>
Scalar soft_threshold(Scalar z, Scalar lambda) {
  if (z > lambda) return z - lambda;
  if (z < -lambda) return z + lambda;
  return Scalar(0);
}

/// Coordinate-descent state for one design matrix. Reusable across a
/// decreasing sequence of lambdas (warm starts).
template <typename Scalar>
class CoordinateDescent {
 public:
  template <typename DerivedX, typename DerivedY>
  CoordinateDescent(const Eigen::MatrixBase<DerivedX>& X, const Eigen::MatrixBase<DerivedY>& y)
      : n_(X.rows()), p_(X.cols()) {
    if (y.size() != n_) throw InputError("lasso: X and y have different numbers of rows");
    if (p_ == 0) throw InputError("lasso: empty vocabulary");
    if (n_ < 1) throw InputError("lasso: no observations");
    if (!X.allFinite() || !y.allFinite()) throw InputError("lasso: non-finite values in X or y");

    x_mean_ = X.colwise().mean().transpose().template cast<Scalar>();
    y_mean_ = y.template cast<Scalar>().mean();
    xc_ = X.template cast<Scalar>();
    xc_.rowwise() -= x_mean_.transpose();
    yc_ = y.template cast<Scalar>().array() - y_mean_;
    const Scalar n = static_cast<Scalar>(n_);
    scale_ = xc_.colwise().squaredNorm().transpose() / n;
    c0_ = xc_.transpose() * yc_ / n;
    yy_ = yc_.squaredNorm();
    beta_ = Vector<Scalar>::Zero(p_);
    grad_ = c0_;
    gram_slot_.assign(static_cast<std::size_t>(p_), -1);
  }

  Index rows() const { return n_; }
  Index cols() const { return p_; }

  /// max_j |X_c,j^T y_c| / n, the smallest lambda with an all-zero solution.
  Scalar lambda_max() const { return c0_.cwiseAbs().maxCoeff(); }

  void reset() {
    beta_.setZero();
    grad_ = c0_;
  }

  template <typename Derived>
  void warm_start(const Eigen::MatrixBase<Derived>& beta) {
    if (beta.size() != p_) throw InputError("lasso: warm start has the wrong length");
    beta_ = beta.template cast<Scalar>();
    grad_ = xc_.transpose() * (yc_ - xc_ * beta_) / static_cast<Scalar>(n_);
  }

  /// Solves at `lambda` from the current state. When `trace` is given the
  /// objective after every coordinate cycle is appended to it.
  LassoFit<Scalar> solve(Scalar lambda, const LassoOptions& options, std::vector<Scalar>* trace = nullptr) {
    if (!(lambda >= 0)) throw InputError("lasso: lambda must be >= 0");
    if (!(options.tol > 0)) throw InputError("lasso: tol must be > 0");
    const Scalar tol = static_cast<Scalar>(options.tol);

    std::vector<Index> active;
    for (Index j = 0; j < p_; ++j)
      if (beta_(j) != 0) active.push_back(j);
    std::vector<char> in_active(static_cast<std::size_t>(p_), 0);
    for (Index j : active) in_active[static_cast<std::size_t>(j)] = 1;

    int cycles = 0;
    bool converged = false;
    while (cycles < options.max_iter) {
      // Full cycle over every coordinate.
      Scalar max_change = 0;
      for (Index j = 0; j < p_; ++j) {
        const Scalar change = update(j, lambda);
        max_change = std::max(max_change, change);
        if (beta_(j) != 0 && !in_active[static_cast<std::size_t>(j)]) {
          in_active[static_cast<std::size_t>(j)] = 1;
          active.push_back(j);
        }
      }
      ++cycles;
      if (trace) trace->push_back(objective(lambda));
      if (max_change < tol) {
        converged = true;
        break;
      }
      // Cycles restricted to the active set until they settle.
      std::sort(active.begin(), active.end());
      while (cycles < options.max_iter) {
        Scalar active_change = 0;
        for (Index j : active) active_change = std::max(active_change, update(j, lambda));
        ++cycles;
        if (trace) trace->push_back(objective(lambda));
        if (active_change < tol) break;
      }
    }

    LassoFit<Scalar> fit;
    fit.lambda = lambda;
    fit.coefficients = beta_;
    fit.intercept = y_mean_ - x_mean_.dot(beta_);
    for (Index j = 0; j < p_; ++j)
      if (beta_(j) != 0) fit.active_set.push_back(j);
    fit.iterations = cycles;
    fit.converged = converged;
    fit.objective_value = objective(lambda);
    return fit;
  }

  /// Penalty-form objective at the current coefficients.
  Scalar objective(Scalar lambda) const {
    // ||r||^2 = y'y - n * b'(c0 + g) where g = X_c' r / n.
    const Scalar n = static_cast<Scalar>(n_);
    Scalar rss = yy_ - n * beta_.dot(c0_ + grad_);
    if (rss < 0) rss = 0;
    return rss / (2 * n) + lambda * beta_.template lpNorm<1>();
  }

 private:
  Index n_;
  Index p_;
  Vector<Scalar> x_mean_;
  Scalar y_mean_ = 0;
  Matrix<Scalar> xc_;
  Vector<Scalar> yc_;
  Vector<Scalar> scale_;  // ||x_c,j||^2 / n
  Vector<Scalar> c0_;     // X_c' y_c / n
  Scalar yy_ = 0;
  Vector<Scalar> beta_;
  Vector<Scalar> grad_;   // X_c' (y_c - X_c b) / n
  std::vector<Vector<Scalar>> gram_;  // cached columns of X_c' X_c
  std::vector<Index> gram_slot_;

  const Vector<Scalar>& gram_column(Index j) {
    Index& slot = gram_slot_[static_cast<std::size_t>(j)];
    if (slot < 0) {
      slot = static_cast<Index>(gram_.size());
      gram_.emplace_back(xc_.transpose() * xc_.col(j));
    }
    return gram_[static_cast<std::size_t>(slot)];
  }

  Scalar update(Index j, Scalar lambda) {
    const Scalar d = scale_(j);
    if (d <= 0) return 0;
    const Scalar old = beta_(j);
    const Scalar z = grad_(j) + d * old;
    const Scalar fresh = soft_threshold(z, lambda) / d;
    if (fresh == old) return 0;
    const Scalar delta = fresh - old;
    beta_(j) = fresh;
    grad_.noalias() -= gram_column(j) * (delta / static_cast<Scalar>(n_));
    return std::abs(delta);
  }
};

template <typename DerivedX, typename DerivedY>
typename DerivedX::Scalar lasso_lambda_max(const Eigen::MatrixBase<DerivedX>& X,
                                           const Eigen::MatrixBase<DerivedY>& y) {
  using Scalar = typename DerivedX::Scalar;
  return CoordinateDescent<Scalar>(X, y).lambda_max();
}

/// Single fit at `lambda`, optionally warm-started.
template <typename DerivedX, typename DerivedY>
LassoFit<typename DerivedX::Scalar> lasso_fit(
    const Eigen::MatrixBase<DerivedX>& X, const Eigen::MatrixBase<DerivedY>& y,
    typename DerivedX::Scalar lambda, const LassoOptions& options = {},
    const Vector<typename DerivedX::Scalar>* warm_start = nullptr,
    std::vector<typename DerivedX::Scalar>* trace = nullptr) {
  using Scalar = typename DerivedX::Scalar;
  CoordinateDescent<Scalar> cd(X, y);
  if (warm_start) cd.warm_start(*warm_start);
  return cd.solve(lambda, options, trace);
}

/// Warm-started fits along a decreasing grid.
template <typename DerivedX, typename DerivedY>
std::vector<LassoFit<typename DerivedX::Scalar>> lasso_path(
    const Eigen::MatrixBase<DerivedX>& X, const Eigen::MatrixBase<DerivedY>& y,
    const std::vector<typename DerivedX::Scalar>& lambdas, const LassoOptions& options = {}) {
  using Scalar = typename DerivedX::Scalar;
  CoordinateDescent<Scalar> cd(X, y);
  std::vector<LassoFit<Scalar>> fits;
  fits.reserve(lambdas.size());
  for (Scalar lambda : lambdas) fits.push_back(cd.solve(lambda, options));
  return fits;
}

/// Log-spaced grid from lambda_max down to ratio * lambda_max.
template <typename Scalar>
std::vector<Scalar> default_grid(Scalar lambda_max, int n_points, Scalar ratio) {
  if (n_points < 2) throw ConfigError("lambda grid needs at least 2 points");
  if (!(ratio > 0 && ratio < 1)) throw ConfigError("lambda grid ratio must lie in (0, 1)");
  if (!(lambda_max > 0) || !std::isfinite(static_cast<double>(lambda_max)))
    throw EstimationError("lambda_max is zero: the response is orthogonal to every term");
  std::vector<Scalar> grid(static_cast<std::size_t>(n_points));
  const Scalar log_ratio = std::log(ratio);
  for (int i = 0; i < n_points; ++i)
    grid[static_cast<std::size_t>(i)] =
        lambda_max * std::exp(log_ratio * static_cast<Scalar>(i) / static_cast<Scalar>(n_points - 1));
  grid.front() = lambda_max;
  grid.back() = lambda_max * ratio;
  return grid;
}

/// Max violation of the LASSO stationarity conditions, computed from an
/// explicit residual. Zero for an exact solution.
template <typename DerivedX, typename DerivedY, typename Scalar>
Scalar lasso_kkt_violation(const Eigen::MatrixBase<DerivedX>& X, const Eigen::MatrixBase<DerivedY>& y,
                           const LassoFit<Scalar>& fit) {
  const Vector<Scalar> r =
      (y.template cast<Scalar>() - X.template cast<Scalar>() * fit.coefficients).array() - fit.intercept;
  const Vector<Scalar> g = X.template cast<Scalar>().transpose() * r / static_cast<Scalar>(X.rows());
  Scalar worst = 0;
  for (Index j = 0; j < g.size(); ++j) {
    const Scalar b = fit.coefficients(j);
    const Scalar v = b != 0 ? std::abs(g(j) - fit.lambda * (b > 0 ? 1 : -1))
                            : std::max<Scalar>(0, std::abs(g(j)) - fit.lambda);
    worst = std::max(worst, v);
  }
  return worst;
}

/// Deterministic Fisher-Yates shuffle of 0..n-1 driven by a seeded mt19937_64.
inline std::vector<Index> shuffled_indices(Index n, std::uint64_t seed) {
  std::vector<Index> order(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) order[static_cast<std::size_t>(i)] = i;
  std::mt19937_64 rng(seed);
  for (Index i = n - 1; i > 0; --i) {
    // unbiased draw in [0, i] by rejection
    const std::uint64_t bound = static_cast<std::uint64_t>(i) + 1;
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % bound;
    std::uint64_t draw;
    do draw = rng();
    while (draw >= limit);
    std::swap(order[static_cast<std::size_t>(i)], order[static_cast<std::size_t>(draw % bound)]);
  }
  return order;
}

/// Cuts shuffled_indices(n, seed) into `n_folds` contiguous blocks.
inline std::vector<Index> assign_folds(Index n, Index n_folds, std::uint64_t seed) {
  if (n_folds < 2 || n_folds > n) throw ConfigError("n_folds must lie between 2 and the number of documents");
  const auto order = shuffled_indices(n, seed);
  std::vector<Index> folds(static_cast<std::size_t>(n));
  for (Index k = 0; k < n_folds; ++k) {
    const Index begin = k * n / n_folds;
    const Index end = (k + 1) * n / n_folds;
    for (Index i = begin; i < end; ++i) folds[static_cast<std::size_t>(order[static_cast<std::size_t>(i)])] = k;
  }
  return folds;
}

struct CrossValidationOptions {
  LassoOptions lasso;
  SelectionRule rule = SelectionRule::min;
  int threads = 1;
};

/// K-fold cross-validation over `lambdas` with explicit fold labels
/// (0..K-1 per row). Returned fits are re-estimated on all rows.
template <typename DerivedX, typename DerivedY>
LassoPath<typename DerivedX::Scalar> cross_validate(
    const Eigen::MatrixBase<DerivedX>& X, const Eigen::MatrixBase<DerivedY>& y,
    const std::vector<Index>& folds, const std::vector<typename DerivedX::Scalar>& lambdas,
    const CrossValidationOptions& options = {}) {
  using Scalar = typename DerivedX::Scalar;
  const Index n = X.rows();
  if (static_cast<Index>(folds.size()) != n) throw ConfigError("fold labels do not match the number of rows");
  if (lambdas.empty()) throw ConfigError("lambda grid is empty");
  for (std::size_t i = 1; i < lambdas.size(); ++i)
    if (!(lambdas[i] < lambdas[i - 1])) throw ConfigError("lambda grid must be strictly decreasing");

  const Index n_folds = *std::max_element(folds.begin(), folds.end()) + 1;
  if (n_folds < 2) throw ConfigError("cross-validation needs at least 2 folds");
  std::vector<Index> fold_size(static_cast<std::size_t>(n_folds), 0);
  for (Index f : folds) {
    if (f < 0) throw ConfigError("negative fold label");
    ++fold_size[static_cast<std::size_t>(f)];
  }
  for (Index k = 0; k < n_folds; ++k)
    if (fold_size[static_cast<std::size_t>(k)] == 0)
      throw ConfigError("fold " + std::to_string(k) + " has no held-out documents");

  const Matrix<Scalar> Xs = X.template cast<Scalar>();
  const Vector<Scalar> ys = y.template cast<Scalar>();
  const Index n_lambdas = static_cast<Index>(lambdas.size());
  Matrix<Scalar> errors(n_folds, n_lambdas);

  auto run_fold = [&](Index k) {
    const Index n_test = fold_size[static_cast<std::size_t>(k)];
    Matrix<Scalar> X_train(n - n_test, Xs.cols()), X_test(n_test, Xs.cols());
    Vector<Scalar> y_train(n - n_test), y_test(n_test);
    Index a = 0, b = 0;
    for (Index i = 0; i < n; ++i) {
      if (folds[static_cast<std::size_t>(i)] == k) {
        X_test.row(b) = Xs.row(i);
        y_test(b++) = ys(i);
      } else {
        X_train.row(a) = Xs.row(i);
        y_train(a++) = ys(i);
      }
    }
    CoordinateDescent<Scalar> cd(X_train, y_train);
    for (Index l = 0; l < n_lambdas; ++l) {
      const auto fit = cd.solve(lambdas[static_cast<std::size_t>(l)], options.lasso);
      const Vector<Scalar> pred = (X_test * fit.coefficients).array() + fit.intercept;
      errors(k, l) = (y_test - pred).squaredNorm() / static_cast<Scalar>(n_test);
    }
  };

  const int threads = std::max(1, std::min<int>(options.threads, static_cast<int>(n_folds)));
  if (threads == 1) {
    for (Index k = 0; k < n_folds; ++k) run_fold(k);
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t)
      pool.emplace_back([&, t] {
        for (Index k = t; k < n_folds; k += threads) run_fold(k);
      });
    for (auto& th : pool) th.join();
  }

  LassoPath<Scalar> path;
  path.lambdas = lambdas;
  path.n_folds = n_folds;
  path.cv_fold_errors = errors;
  path.selection_rule = options.rule;
  for (Index l = 0; l < n_lambdas; ++l) {
    const auto col = errors.col(l);
    const Scalar mean = col.mean();
    const Scalar var = (col.array() - mean).square().sum() / static_cast<Scalar>(n_folds - 1);
    path.cv_mean_error.push_back(mean);
    path.cv_se_error.push_back(std::sqrt(var / static_cast<Scalar>(n_folds)));
  }

  // Ties go to the largest lambda, i.e. the earliest grid point.
  Index best = 0;
  for (Index l = 1; l < n_lambdas; ++l)
    if (path.cv_mean_error[static_cast<std::size_t>(l)] < path.cv_mean_error[static_cast<std::size_t>(best)]) best = l;
  if (options.rule == SelectionRule::one_se) {
    const Scalar threshold =
        path.cv_mean_error[static_cast<std::size_t>(best)] + path.cv_se_error[static_cast<std::size_t>(best)];
    for (Index l = 0; l <= best; ++l)
      if (path.cv_mean_error[static_cast<std::size_t>(l)] <= threshold) {
        best = l;
        break;
      }
  }
  path.selected_index = best;
  path.selected_lambda = lambdas[static_cast<std::size_t>(best)];
  path.fits = lasso_path(Xs, ys, lambdas, options.lasso);
  return path;
}

template <typename DerivedX, typename DerivedY>
LassoPath<typename DerivedX::Scalar> cross_validate(
    const Eigen::MatrixBase<DerivedX>& X, const Eigen::MatrixBase<DerivedY>& y, Index n_folds,
    const std::vector<typename DerivedX::Scalar>& lambdas, std::uint64_t fold_seed,
    const CrossValidationOptions& options = {}) {
  return cross_validate(X, y, assign_folds(X.rows(), n_folds, fold_seed), lambdas, options);
}

}  // namespace polarity
