#pragma once

#include <Eigen/Dense>

#include <span>

namespace rainbow::linalg {

/// Singular value decomposition of a lower bidiagonal matrix
/// (diagonal d, subdiagonal e) computed to high relative accuracy.
///
/// Singular values come out in decreasing order; B = U diag(s) V^T.
struct BidiagonalSvd {
    Eigen::VectorXd values;
    Eigen::MatrixXd U;
    Eigen::MatrixXd V;
};

BidiagonalSvd lower_bidiagonal_svd(std::span<const double> diagonal,
                                   std::span<const double> subdiagonal);

/// Dense symmetric eigendecomposition (Householder tridiagonalization and
/// implicit QR, no external BLAS), eigenvalues ascending.
struct SymmetricEigen {
    Eigen::VectorXd values;
    Eigen::MatrixXd vectors;
};

SymmetricEigen symmetric_eigen(const Eigen::MatrixXd& A);

/// Eigenvalues only, ascending.
Eigen::VectorXd symmetric_eigenvalues(const Eigen::MatrixXd& A);

} // namespace rainbow::linalg
