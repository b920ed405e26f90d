#include "flatband/protected_state.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace flatband {

using linalg::Mat;
using linalg::Vec;

cplx ProtectedState::eval(cplx z) const {
    cplx s = 0;
    for (size_t i = 0; i < modes.size(); ++i)
        s += coeffs[int(i)] * std::exp(cplx(0, 1) * pairing(z, modes[i].value()));
    return s;
}

cplx ProtectedState::eval_dzbar2(cplx z) const {
    cplx s = 0;
    for (size_t i = 0; i < modes.size(); ++i) {
        cplx p = modes[i].value();
        s += p * coeffs[int(i)] * std::exp(cplx(0, 1) * pairing(z, p));
    }
    return s;
}

cplx ProtectedState::eval_dz(cplx z, int order) const {
    cplx s = 0;
    for (size_t i = 0; i < modes.size(); ++i) {
        cplx p = modes[i].value();
        cplx f = std::pow(cplx(0, 0.5) * std::conj(p), order);
        s += f * coeffs[int(i)] * std::exp(cplx(0, 1) * pairing(z, p));
    }
    return s;
}

// squared norm of the 2-vector (alpha^{-1} 2 D_zbar u, u) with gradient and
// Hessian in (x,y); this is the object whose zeros carry the multiplicity
void ProtectedState::value_grad_hess(cplx z, double& val, Eigen::Vector2d& grad,
                                     Eigen::Matrix2d& hess) const {
    val = 0;
    grad.setZero();
    hess.setZero();
    const bool with_pair = std::abs(alpha) > 1e-12;
    for (int comp = 0; comp < (with_pair ? 2 : 1); ++comp) {
        cplx u = 0, ux = 0, uy = 0, uxx = 0, uxy = 0, uyy = 0;
        for (size_t i = 0; i < modes.size(); ++i) {
            cplx p = modes[i].value();
            cplx c = coeffs[int(i)];
            if (comp == 1) c *= p / alpha;
            cplx e = c * std::exp(cplx(0, 1) * pairing(z, p));
            cplx gx = cplx(0, 1) * p.real();  // d/dx of i<z,p> -> i Re p
            cplx gy = cplx(0, 1) * p.imag();
            u += e;
            ux += gx * e;
            uy += gy * e;
            uxx += gx * gx * e;
            uxy += gx * gy * e;
            uyy += gy * gy * e;
        }
        val += std::norm(u);
        grad[0] += 2.0 * (std::conj(u) * ux).real();
        grad[1] += 2.0 * (std::conj(u) * uy).real();
        hess(0, 0) += 2.0 * ((std::conj(ux) * ux).real() + (std::conj(u) * uxx).real());
        hess(1, 1) += 2.0 * ((std::conj(uy) * uy).real() + (std::conj(u) * uyy).real());
        hess(0, 1) += 2.0 * ((std::conj(ux) * uy).real() + (std::conj(u) * uxy).real());
    }
    hess(1, 0) = hess(0, 1);
}

cplx ProtectedState::pair_component(cplx z, int comp) const {
    if (comp == 0) return eval(z);
    return eval_dzbar2(z) / alpha;
}

double ProtectedState::pair_norm_at(cplx z) const {
    if (std::abs(alpha) <= 1e-12) return std::abs(eval(z));
    return std::sqrt(std::norm(eval(z)) + std::norm(eval_dzbar2(z) / alpha));
}

double ProtectedState::sup_on_cell(int samples) const {
    double m = 0;
    for (int i = 0; i < samples; ++i)
        for (int j = 0; j < samples; ++j)
            m = std::max(m, std::abs(eval(double(i) / samples * TriangularLattice::omega() +
                                          double(j) / samples)));
    return m;
}

double ProtectedState::two_vector_norm() const {
    double s = 0;
    for (size_t i = 0; i < modes.size(); ++i) {
        cplx p = modes[i].value();
        s += std::norm(p * coeffs[int(i)] / alpha) + std::norm(coeffs[int(i)]);
    }
    return std::sqrt(s * TriangularLattice::cell_area());
}

ProtectedState sector_kernel_state(const TrigPoly2& V, cplx alpha, const ModeBasis& basis,
                                   int ell) {
    linalg::SpMat Bd = sector_basis(basis, ell);
    Mat blk = sector_block_p(V, alpha, basis, ell);
    const int ncols = int(blk.cols());
    // full SVD: when n_domain > n_range (the ell = 0 block, whose domain
    // carries the extra p = 0 orbit) the kernel direction is structural and
    // only appears in the full V factor
    linalg::Svd s = linalg::svd_full(blk);
    Vec null_dir = s.V.col(ncols - 1);

    ProtectedState st;
    st.alpha = alpha;
    st.sector = ((ell % 6) + 6) % 6;
    st.modes = basis.points();
    st.coeffs = Bd * null_dir;
    st.residual = (blk * null_dir).norm();
    // smallest singular value of the block beyond the kernel direction
    if (ncols > int(blk.rows()))
        st.next_block_sv = s.sigma[s.sigma.size() - 1];
    else
        st.next_block_sv = s.sigma.size() >= 2 ? s.sigma[s.sigma.size() - 2] : 0.0;
    st.degenerate_warning = st.next_block_sv < 1e-6 * std::max(1.0, blk.norm());

    // phase fix: u(z_ref) real positive at a generic real point
    const cplx zref(0.17, 0.0);
    cplx v = st.eval(zref);
    if (std::abs(v) > 1e-12 * st.coeffs.norm()) st.coeffs *= std::conj(v) / std::abs(v);
    st.coeffs /= st.coeffs.norm();
    return st;
}

ProtectedState protected_state(const TrigPoly2& V, cplx alpha, double radius) {
    ModeBasis basis(radius);
    return sector_kernel_state(V, alpha, basis, 0);
}

std::vector<ZeroRecord> zero_census(const ProtectedState& state, int grid) {
    // zeros and multiplicities belong to the 2-vector (alpha^{-1} 2D_zbar u, u)
    double sup = 0;
    for (int i = 0; i < 48; ++i)
        for (int j = 0; j < 48; ++j)
            sup = std::max(sup, state.pair_norm_at(double(i) / 48 * TriangularLattice::omega() +
                                                   double(j) / 48));
    if (sup <= 0) throw std::runtime_error("zero_census: trivial state");
    Eigen::MatrixXd vals(grid, grid);
    for (int i = 0; i < grid; ++i)
        for (int j = 0; j < grid; ++j)
            vals(i, j) = state.pair_norm_at(double(i) / grid * TriangularLattice::omega() +
                                            double(j) / grid);
    std::vector<cplx> cand;
    for (int i = 0; i < grid; ++i)
        for (int j = 0; j < grid; ++j) {
            double v = vals(i, j);
            if (v > 5e-3 * sup) continue;
            bool min8 = true;
            for (int di = -1; di <= 1 && min8; ++di)
                for (int dj = -1; dj <= 1 && min8; ++dj)
                    min8 = v <= vals((i + di + grid) % grid, (j + dj + grid) % grid);
            if (min8) cand.push_back(double(i) / grid * TriangularLattice::omega() +
                                     double(j) / grid);
        }
    // Newton refinement on the squared pair norm
    std::vector<ZeroRecord> zeros;
    for (cplx z0 : cand) {
        cplx z = z0;
        for (int it = 0; it < 60; ++it) {
            double val;
            Eigen::Vector2d g;
            Eigen::Matrix2d h;
            state.value_grad_hess(z, val, g, h);
            Eigen::Vector2d step = h.fullPivLu().solve(g);
            double damp = 1.0;
            if (step.norm() > 0.05) damp = 0.05 / step.norm();
            z -= damp * cplx(step[0], step[1]);
            if (step.norm() < 1e-14) break;
        }
        if (state.pair_norm_at(z) > 1e-6 * sup)
            throw std::runtime_error("zero_census: unresolved zero candidate");
        cplx rep = reduce_to_cell(z);
        bool dup = false;
        for (auto& rec : zeros)
            if (std::abs(reduce_to_cell(rec.location - rep)) < 1e-6) { dup = true; break; }
        if (dup) continue;
        // multiplicity from the radial decay of the pair norm on circles
        auto circle_mean = [&](double r) {
            double acc = 0;
            for (int a = 0; a < 24; ++a)
                acc += state.pair_norm_at(
                    rep + r * std::exp(cplx(0, 2 * TriangularLattice::pi() * a / 24.0)));
            return acc / 24.0;
        };
        double m1 = std::log(circle_mean(1e-2) / circle_mean(5e-3)) / std::log(2.0);
        double m2 = std::log(circle_mean(5e-3) / circle_mean(2.5e-3)) / std::log(2.0);
        ZeroRecord rec;
        rec.location = rep;
        rec.multiplicity = std::max(1, int(std::lround(0.5 * (m1 + m2))));
        rec.value = state.pair_norm_at(rep);
        zeros.push_back(rec);
    }
    std::sort(zeros.begin(), zeros.end(), [](const ZeroRecord& a, const ZeroRecord& b) {
        return std::abs(a.location) < std::abs(b.location);
    });
    return zeros;
}

namespace {

// real part of the state along the hexagon edge, with a consistency check
// that the state really is real there (up to the reported ratio)
std::vector<double> edge_trace(const ProtectedState& state, int samples, double* imag_ratio) {
    std::vector<double> re(samples);
    double max_im = 0, max_abs = 0;
    for (int i = 0; i < samples; ++i) {
        double t = 1.0 + double(i) / (samples - 1);
        cplx v = state.eval(cplx(0, t / std::sqrt(3.0)));
        re[i] = v.real();
        max_im = std::max(max_im, std::abs(v.imag()));
        max_abs = std::max(max_abs, std::abs(v));
    }
    if (imag_ratio) *imag_ratio = max_abs > 0 ? max_im / max_abs : 0.0;
    return re;
}

}  // namespace

int edge_zero_count(const ProtectedState& state, int samples) {
    std::vector<double> re = edge_trace(state, samples, nullptr);
    double scale = 0;
    for (double v : re) scale = std::max(scale, std::abs(v));
    int count = 0;
    for (int i = 1; i < samples; ++i) {
        if (re[i - 1] == 0.0) continue;
        if ((re[i - 1] > 0) != (re[i] > 0)) {
            // ignore sign flips at noise level
            if (std::max(std::abs(re[i - 1]), std::abs(re[i])) > 1e-9 * scale) ++count;
        }
    }
    return count;
}

double edge_imag_ratio(const ProtectedState& state, int samples) {
    double r = 0;
    edge_trace(state, samples, &r);
    return r;
}

WronskianResult wronskian(const ProtectedState& u, const ProtectedState& v, int samples) {
    if (std::abs(u.alpha - v.alpha) > 1e-12 * std::max(1.0, std::abs(u.alpha)))
        throw std::invalid_argument("wronskian: states must share alpha");
    const double nu = u.two_vector_norm(), nv = v.two_vector_norm();
    const cplx alpha = u.alpha;
    std::vector<cplx> ws(samples);
    std::mt19937 rng(515151);
    std::uniform_real_distribution<double> d(-0.8, 0.8);
    cplx mean = 0;
    for (int i = 0; i < samples; ++i) {
        cplx z(d(rng), d(rng));
        // 2-vectors (alpha^{-1} 2D_zbar u, -u): Wr = u1 v2 - u2 v1
        cplx u1 = u.eval_dzbar2(z) / alpha, u2 = -u.eval(z);
        cplx v1 = v.eval_dzbar2(z) / alpha, v2 = -v.eval(z);
        ws[i] = (u1 * v2 - u2 * v1) / (nu * nv);
        mean += ws[i];
    }
    mean /= double(samples);
    double var = 0;
    for (cplx w : ws) var += std::norm(w - mean);
    WronskianResult out;
    out.value = mean;
    out.constancy = std::sqrt(var / samples) / std::max(std::abs(mean), 1e-300);
    return out;
}

}  // namespace flatband
