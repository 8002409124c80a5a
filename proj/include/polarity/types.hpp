#pragma once

#include <Eigen/Core>

#include <limits>
#include <vector>

namespace polarity {

using Index = Eigen::Index;

template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using MatrixXd = Matrix<double>;
using VectorXd = Vector<double>;

/// Marker for statistics that are undefined on the given input.
template <typename Scalar = double>
constexpr Scalar undefined() {
  return std::numeric_limits<Scalar>::quiet_NaN();
}

template <typename Scalar = double>
constexpr Scalar infinity() {
  return std::numeric_limits<Scalar>::infinity();
}

}  // namespace polarity
