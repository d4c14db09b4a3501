#include "rainbow/linalg.hpp"

#include "rainbow/errors.hpp"

#include <Eigen/Eigenvalues>

#include <cstddef>
#include <string>
#include <vector>

extern "C" {
void dbdsqr_(const char* uplo, const int* n, const int* ncvt, const int* nru, const int* ncc,
             double* d, double* e, double* vt, const int* ldvt, double* u, const int* ldu,
             double* c, const int* ldc, double* work, int* info, std::size_t uplo_len);
}

namespace rainbow::linalg {

BidiagonalSvd lower_bidiagonal_svd(std::span<const double> diagonal,
                                   std::span<const double> subdiagonal) {
    const int n = static_cast<int>(diagonal.size());
    if (n == 0 || static_cast<int>(subdiagonal.size()) != n - 1)
        throw ContractViolation("bidiagonal svd: subdiagonal must have n-1 entries");

    std::vector<double> d(diagonal.begin(), diagonal.end());
    std::vector<double> e(subdiagonal.begin(), subdiagonal.end());
    e.push_back(0.0);

    // dbdsqr overwrites U and VT with U*Q and P^T*VT, so start from identity.
    Eigen::MatrixXd U = Eigen::MatrixXd::Identity(n, n);
    Eigen::MatrixXd VT = Eigen::MatrixXd::Identity(n, n);
    double c_dummy = 0.0;
    std::vector<double> work(4 * static_cast<std::size_t>(n));
    const int ncc = 0, ldc = 1;
    int info = 0;
    dbdsqr_("L", &n, &n, &n, &ncc, d.data(), e.data(), VT.data(), &n, U.data(), &n, &c_dummy, &ldc,
            work.data(), &info, 1);
    if (info != 0)
        throw NumericError("dbdsqr failed to converge (info=" + std::to_string(info) + ", n=" +
                           std::to_string(n) + ")");

    BidiagonalSvd out;
    out.values = Eigen::Map<Eigen::VectorXd>(d.data(), n);
    out.U = std::move(U);
    out.V = VT.transpose();
    return out;
}

namespace {

SymmetricEigen run_eigen_solver(const Eigen::MatrixXd& A, bool want_vectors) {
    SymmetricEigen out;
    if (A.rows() == 0) {
        out.values.resize(0);
        return out;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(
        A, want_vectors ? Eigen::ComputeEigenvectors : Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success)
        throw NumericError("symmetric eigensolver did not converge (n=" + std::to_string(A.rows()) +
                           ")");
    out.values = solver.eigenvalues();
    if (want_vectors)
        out.vectors = solver.eigenvectors();
    return out;
}

} // namespace

SymmetricEigen symmetric_eigen(const Eigen::MatrixXd& A) { return run_eigen_solver(A, true); }

Eigen::VectorXd symmetric_eigenvalues(const Eigen::MatrixXd& A) {
    return run_eigen_solver(A, false).values;
}

} // namespace rainbow::linalg
