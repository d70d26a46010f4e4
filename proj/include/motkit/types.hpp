#pragma once

#include <Eigen/Dense>

namespace motkit {

template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

template <typename Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

using Real = double;
using Vector = VectorX<Real>;
using Matrix = MatrixX<Real>;
using BoolMatrix = MatrixX<bool>;

}  // namespace motkit
