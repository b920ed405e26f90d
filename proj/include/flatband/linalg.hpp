#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <functional>
#include <vector>

#include "flatband/lattice.hpp"

namespace flatband::linalg {

using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;
using SpMat = Eigen::SparseMatrix<cplx>;

// Eigenvalues of a general complex dense matrix (LAPACK zgeev).
std::vector<cplx> eigenvalues(Mat A);

struct Eig {
    std::vector<cplx> values;
    Mat right;  // columns are right eigenvectors
};
Eig eigen_decomp(Mat A);

// Singular values, descending (LAPACK zgesdd, values only).
Eigen::VectorXd singular_values(Mat A);

struct Svd {
    Eigen::VectorXd sigma;  // descending
    Mat U, V;               // A = U * diag(sigma) * V^H
};
Svd svd(Mat A);       // economy factors
Svd svd_full(Mat A);  // square U (m x m) and V (n x n), includes null spaces

// Dense LU with partial pivoting (zgetrf/zgetrs); keeps the factorization.
class DenseLU {
  public:
    explicit DenseLU(Mat A);
    Vec solve(const Vec& b) const;
    Vec solve_adjoint(const Vec& b) const;
    Mat solve(const Mat& B) const;

  private:
    mutable Mat lu_;
    std::vector<int> piv_;
};

// Arnoldi iteration for the eigenvalues of largest modulus of a linear map.
// Single pass with Krylov dimension m; returns Ritz values with residual
// estimates |h_{m+1,m}| |e_m^T y|.
struct ArnoldiResult {
    std::vector<cplx> values;
    std::vector<double> residuals;
    Mat basis;            // n x m orthonormal Krylov basis
    Mat ritz_coeffs;      // m x m right eigenvectors of the Hessenberg block
};
ArnoldiResult arnoldi(const std::function<void(const Vec&, Vec&)>& apply, int n, int m,
                      unsigned seed);

// Smallest singular triplets of A via shift-invert Lanczos on (A^H A)^{-1},
// given solver callbacks for A x = b and A^H x = b.  Sequential deflation,
// full reorthogonalization.
struct SmallSvResult {
    std::vector<double> sigma;      // ascending
    std::vector<Vec> right;         // right singular vectors
};
SmallSvResult smallest_singular(const std::function<Vec(const Vec&)>& solve_a,
                                const std::function<Vec(const Vec&)>& solve_ah, int n, int want,
                                int max_iter, unsigned seed, double tol = 1e-10);

// Convenience: smallest singular triplets of a sparse matrix via SparseLU.
SmallSvResult smallest_singular_sparse(const SpMat& A, int want, unsigned seed = 1234,
                                       int max_iter = 120, double tol = 1e-10);

}  // namespace flatband::linalg
