#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace stokesdarcy {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
using SpMat = Eigen::SparseMatrix<double>;
using Triplet = Eigen::Triplet<double>;

/// Coefficient vector over the interface flux basis Λ_h.
using InterfaceVector = Eigen::VectorXd;

} // namespace stokesdarcy
