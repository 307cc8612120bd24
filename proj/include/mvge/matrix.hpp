#pragma once

#include <Eigen/Core>

namespace mvge {

// Dense row-major real matrix used for features, parameters and embeddings.
using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vector = Eigen::VectorXd;
using RowVector = Eigen::Matrix<double, 1, Eigen::Dynamic>;

inline bool all_finite(const Matrix& m) { return m.allFinite(); }

}  // namespace mvge
