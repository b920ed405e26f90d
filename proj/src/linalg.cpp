#include <complex>
#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <lapacke.h>

#include "flatband/linalg.hpp"

#include <Eigen/SparseLU>
#include <random>
#include <stdexcept>

namespace flatband::linalg {

static void check_info(int info, const char* what) {
    if (info != 0) throw std::runtime_error(std::string(what) + ": LAPACK info != 0");
}

std::vector<cplx> eigenvalues(Mat A) {
    const int n = int(A.rows());
    std::vector<cplx> w(n);
    int info = LAPACKE_zgeev(LAPACK_COL_MAJOR, 'N', 'N', n, A.data(), n, w.data(), nullptr, 1,
                             nullptr, 1);
    check_info(info, "zgeev");
    return w;
}

Eig eigen_decomp(Mat A) {
    const int n = int(A.rows());
    Eig out;
    out.values.resize(n);
    out.right.resize(n, n);
    int info = LAPACKE_zgeev(LAPACK_COL_MAJOR, 'N', 'V', n, A.data(), n, out.values.data(),
                             nullptr, 1, out.right.data(), n);
    check_info(info, "zgeev");
    return out;
}

Eigen::VectorXd singular_values(Mat A) {
    const int m = int(A.rows()), n = int(A.cols());
    Eigen::VectorXd s(std::min(m, n));
    int info = LAPACKE_zgesdd(LAPACK_COL_MAJOR, 'N', m, n, A.data(), m, s.data(), nullptr, 1,
                              nullptr, 1);
    check_info(info, "zgesdd");
    return s;
}

Svd svd(Mat A) {
    const int m = int(A.rows()), n = int(A.cols());
    const int k = std::min(m, n);
    Svd out;
    out.sigma.resize(k);
    out.U.resize(m, k);
    Mat vt(k, n);
    int info = LAPACKE_zgesdd(LAPACK_COL_MAJOR, 'S', m, n, A.data(), m, out.sigma.data(),
                              out.U.data(), m, vt.data(), k);
    check_info(info, "zgesdd");
    out.V = vt.adjoint();
    return out;
}

Svd svd_full(Mat A) {
    const int m = int(A.rows()), n = int(A.cols());
    Svd out;
    out.sigma.resize(std::min(m, n));
    out.U.resize(m, m);
    Mat vt(n, n);
    int info = LAPACKE_zgesdd(LAPACK_COL_MAJOR, 'A', m, n, A.data(), m, out.sigma.data(),
                              out.U.data(), m, vt.data(), n);
    check_info(info, "zgesdd");
    out.V = vt.adjoint();
    return out;
}

DenseLU::DenseLU(Mat A) : lu_(std::move(A)), piv_(lu_.rows()) {
    const int n = int(lu_.rows());
    int info = LAPACKE_zgetrf(LAPACK_COL_MAJOR, n, n, lu_.data(), n, piv_.data());
    check_info(info, "zgetrf");
}

Vec DenseLU::solve(const Vec& b) const {
    Vec x = b;
    const int n = int(lu_.rows());
    int info = LAPACKE_zgetrs(LAPACK_COL_MAJOR, 'N', n, 1, lu_.data(), n, piv_.data(), x.data(), n);
    check_info(info, "zgetrs");
    return x;
}

Vec DenseLU::solve_adjoint(const Vec& b) const {
    Vec x = b;
    const int n = int(lu_.rows());
    int info = LAPACKE_zgetrs(LAPACK_COL_MAJOR, 'C', n, 1, lu_.data(), n, piv_.data(), x.data(), n);
    check_info(info, "zgetrs");
    return x;
}

Mat DenseLU::solve(const Mat& B) const {
    Mat X = B;
    const int n = int(lu_.rows());
    int info = LAPACKE_zgetrs(LAPACK_COL_MAJOR, 'N', n, int(B.cols()), lu_.data(), n, piv_.data(),
                              X.data(), n);
    check_info(info, "zgetrs");
    return X;
}

ArnoldiResult arnoldi(const std::function<void(const Vec&, Vec&)>& apply, int n, int m,
                      unsigned seed) {
    m = std::min(m, n);
    std::mt19937 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    Mat Q(n, m + 1);
    Vec v(n);
    for (int i = 0; i < n; ++i) v[i] = cplx(gauss(rng), gauss(rng));
    Q.col(0) = v / v.norm();
    Mat H = Mat::Zero(m + 1, m);
    Vec w(n);
    int steps = m;
    for (int j = 0; j < m; ++j) {
        apply(Q.col(j), w);
        // modified Gram-Schmidt, twice
        for (int pass = 0; pass < 2; ++pass)
            for (int i = 0; i <= j; ++i) {
                cplx h = Q.col(i).dot(w);
                H(i, j) += h;
                w -= h * Q.col(i);
            }
        double beta = w.norm();
        H(j + 1, j) = beta;
        if (beta < 1e-14) { steps = j + 1; break; }
        Q.col(j + 1) = w / beta;
    }
    Mat Hm = H.topLeftCorner(steps, steps);
    Eig eig = eigen_decomp(Hm);
    ArnoldiResult out;
    out.values = eig.values;
    out.residuals.resize(steps);
    double beta = std::abs(H(steps, steps - 1));
    for (int i = 0; i < steps; ++i)
        out.residuals[i] = beta * std::abs(eig.right(steps - 1, i)) /
                           std::max(eig.right.col(i).norm(), 1e-300);
    out.basis = Q.leftCols(steps);
    out.ritz_coeffs = eig.right;
    return out;
}

SmallSvResult smallest_singular(const std::function<Vec(const Vec&)>& solve_a,
                                const std::function<Vec(const Vec&)>& solve_ah, int n, int want,
                                int max_iter, unsigned seed, double tol) {
    // Lanczos on M = A^{-1} A^{-H} (Hermitian PSD with eigenvalues 1/sigma^2,
    // eigenvectors the right singular vectors), deflating converged vectors.
    std::mt19937 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    SmallSvResult out;
    std::vector<Vec> deflate;
    auto apply_m = [&](const Vec& x) { return solve_a(solve_ah(x)); };

    for (int k = 0; k < want; ++k) {
        Vec v(n);
        for (int i = 0; i < n; ++i) v[i] = cplx(gauss(rng), gauss(rng));
        std::vector<Vec> basis;
        std::vector<double> alpha, beta;
        auto orth = [&](Vec& x) {
            for (int pass = 0; pass < 2; ++pass) {
                for (const auto& d : deflate) x -= d.dot(x) * d;
                for (const auto& b : basis) x -= b.dot(x) * b;
            }
        };
        orth(v);
        v /= v.norm();
        basis.push_back(v);
        double lam_prev = 0;
        Eigen::VectorXd ritz_vec;
        double lam = 0;
        int iters = std::min(max_iter, n - int(deflate.size()));
        Eigen::VectorXd d_diag, e_off;
        Eigen::MatrixXd z;
        for (int j = 0; j < iters; ++j) {
            Vec w = apply_m(basis[j]);
            double a = basis[j].dot(w).real();
            alpha.push_back(a);
            orth(w);
            double b = w.norm();
            // tridiagonal eigensolve (LAPACK dstev) on the current block
            int mdim = int(alpha.size());
            d_diag = Eigen::Map<Eigen::VectorXd>(alpha.data(), mdim);
            e_off.resize(std::max(mdim - 1, 1));
            for (int i = 0; i + 1 < mdim; ++i) e_off[i] = beta[i];
            z.resize(mdim, mdim);
            int info = LAPACKE_dstev(LAPACK_COL_MAJOR, 'V', mdim, d_diag.data(), e_off.data(),
                                     z.data(), mdim);
            check_info(info, "dstev");
            lam = d_diag[mdim - 1];  // largest of M = smallest sigma
            ritz_vec = z.col(mdim - 1);
            double resid = (mdim > 1) ? b * std::abs(ritz_vec[mdim - 1]) : b;
            if (resid < tol * std::max(lam, 1e-300) && j >= 2) break;
            if (j > 6 && std::abs(lam - lam_prev) < 1e-14 * std::abs(lam)) break;
            lam_prev = lam;
            if (b < 1e-140) break;
            beta.push_back(b);
            basis.push_back(w / b);
        }
        Vec ritz = Vec::Zero(n);
        for (size_t i = 0; i < (size_t)ritz_vec.size() && i < basis.size(); ++i)
            ritz += cplx(ritz_vec[int(i)], 0.0) * basis[i];
        ritz /= ritz.norm();
        out.sigma.push_back(lam > 0 ? 1.0 / std::sqrt(lam) : std::numeric_limits<double>::infinity());
        out.right.push_back(ritz);
        deflate.push_back(ritz);
    }
    return out;
}

SmallSvResult smallest_singular_sparse(const SpMat& A, int want, unsigned seed, int max_iter,
                                       double tol) {
    Eigen::SparseLU<SpMat, Eigen::COLAMDOrdering<int>> lu;
    lu.compute(A);
    if (lu.info() != Eigen::Success)
        throw std::runtime_error("smallest_singular_sparse: factorization failed");
    auto solve_a = [&](const Vec& b) { return Vec(lu.solve(b)); };
    auto solve_ah = [&](const Vec& b) { return Vec(lu.adjoint().solve(b)); };
    return smallest_singular(solve_a, solve_ah, int(A.rows()), want, max_iter, seed, tol);
}

}  // namespace flatband::linalg
