#include "flatband/torus_ops.hpp"

#include <cmath>
#include <stdexcept>

namespace flatband {

using linalg::Mat;
using linalg::SpMat;
using linalg::Vec;

ModeBasis::ModeBasis(double radius) : points_(dual_points(radius)), radius_(radius) {
    for (size_t i = 0; i < points_.size(); ++i) index_[{points_[i].m, points_[i].n}] = int(i);
    values_.resize(points_.size());
    for (size_t i = 0; i < points_.size(); ++i) values_[i] = points_[i].value();
}

int ModeBasis::find(int m, int n) const {
    auto it = index_.find({m, n});
    return it == index_.end() ? -1 : it->second;
}

namespace {

// coupling offsets of a Lambda-periodic potential in dual coordinates
std::vector<std::tuple<int, int, cplx>> dual_offsets(const TrigPoly2& V) {
    std::vector<std::tuple<int, int, cplx>> out;
    for (const auto& [k, a] : V.dual_terms()) out.emplace_back(k.first, k.second, a);
    return out;
}

}  // namespace

Mat assemble_p_matrix(const TrigPoly2& V, cplx alpha, cplx k, const ModeBasis& basis) {
    const int n = basis.size();
    Mat P = Mat::Zero(n, n);
    auto off = dual_offsets(V);
    const cplx a2 = alpha * alpha;
    for (int j = 0; j < n; ++j) {
        const DualIndex& q = basis.points()[j];
        for (const auto& [dm, dn, c] : off) {
            int i = basis.find(q.m + dm, q.n + dn);
            if (i >= 0) P(i, j) -= a2 * c;
        }
        cplx d = basis.values()[j] + k;
        P(j, j) += d * d;
    }
    return P;
}

SpMat assemble_p_sparse(const TrigPoly2& V, cplx alpha, cplx k, const ModeBasis& basis) {
    const int n = basis.size();
    auto off = dual_offsets(V);
    std::vector<Eigen::Triplet<cplx>> trip;
    trip.reserve(size_t(n) * (off.size() + 1));
    const cplx a2 = alpha * alpha;
    for (int j = 0; j < n; ++j) {
        const DualIndex& q = basis.points()[j];
        for (const auto& [dm, dn, c] : off) {
            int i = basis.find(q.m + dm, q.n + dn);
            if (i >= 0) trip.emplace_back(i, j, -a2 * c);
        }
        cplx d = basis.values()[j] + k;
        trip.emplace_back(j, j, d * d);
    }
    SpMat P(n, n);
    P.setFromTriplets(trip.begin(), trip.end());
    return P;
}

TruncatedOperator assemble_p(const TrigPoly2& V, cplx alpha, cplx k, double radius) {
    ModeBasis basis(radius);
    TruncatedOperator op;
    op.matrix = assemble_p_matrix(V, alpha, k, basis);
    op.index_map = basis.points();
    op.components = 1;
    op.truncation_radius = radius;
    op.alpha = alpha;
    op.k = k;
    return op;
}

Mat assemble_ds_matrix(const TrigPoly2& V, cplx alpha, cplx k, const ModeBasis& basis) {
    const int n = basis.size();
    Mat D = Mat::Zero(2 * n, 2 * n);
    auto off = dual_offsets(V);
    for (int j = 0; j < n; ++j) {
        const DualIndex& q = basis.points()[j];
        cplx d = basis.values()[j] + k;
        D(j, j) = d;
        D(n + j, n + j) = d;
        D(n + j, j) = alpha;
        for (const auto& [dm, dn, c] : off) {
            int i = basis.find(q.m + dm, q.n + dn);
            if (i >= 0) D(i, n + j) += alpha * c;
        }
    }
    return D;
}

SpMat assemble_ds_sparse(const TrigPoly2& V, cplx alpha, cplx k, const ModeBasis& basis) {
    const int n = basis.size();
    auto off = dual_offsets(V);
    std::vector<Eigen::Triplet<cplx>> trip;
    trip.reserve(size_t(n) * (off.size() + 3));
    for (int j = 0; j < n; ++j) {
        const DualIndex& q = basis.points()[j];
        cplx d = basis.values()[j] + k;
        trip.emplace_back(j, j, d);
        trip.emplace_back(n + j, n + j, d);
        trip.emplace_back(n + j, j, alpha);
        for (const auto& [dm, dn, c] : off) {
            int i = basis.find(q.m + dm, q.n + dn);
            if (i >= 0) trip.emplace_back(i, n + j, alpha * c);
        }
    }
    SpMat D(2 * n, 2 * n);
    D.setFromTriplets(trip.begin(), trip.end());
    return D;
}

TruncatedOperator assemble_ds(const TrigPoly2& V, cplx alpha, cplx k, double radius) {
    ModeBasis basis(radius);
    TruncatedOperator op;
    op.matrix = assemble_ds_matrix(V, alpha, k, basis);
    op.index_map = basis.points();
    op.components = 2;
    op.truncation_radius = radius;
    op.alpha = alpha;
    op.k = k;
    return op;
}

BirmanSchwingerOperator assemble_birman(const TrigPoly2& V, cplx k, double radius) {
    ModeBasis basis(radius);
    const int n = basis.size();
    double dist = 1e300;
    for (const DualIndex& p : dual_points(std::abs(k) + 2 * std::abs(TriangularLattice::dual_scale())))
        dist = std::min(dist, std::abs(k + p.value()));
    dist = std::min(dist, std::abs(k));
    if (dist <= 1e-6)
        throw std::domain_error("assemble_birman: k too close to the dual lattice");
    BirmanSchwingerOperator op;
    op.k = k;
    op.truncation_radius = radius;
    op.matrix = Mat::Zero(n, n);
    auto off = dual_offsets(V);
    for (int j = 0; j < n; ++j) {
        const DualIndex& q = basis.points()[j];
        for (const auto& [dm, dn, c] : off) {
            int i = basis.find(q.m + dm, q.n + dn);
            if (i < 0) continue;
            cplx d = basis.values()[i] + k;
            op.matrix(i, j) += c / (d * d);
        }
    }
    return op;
}

std::function<void(const Vec&, Vec&)> birman_apply(const TrigPoly2& V, cplx k,
                                                   const ModeBasis& basis) {
    auto off = dual_offsets(V);
    // row targets precomputed: for column j list of (i, coeff/(p_i+k)^2)
    const int n = basis.size();
    std::vector<std::vector<std::pair<int, cplx>>> cols(n);
    for (int j = 0; j < n; ++j) {
        const DualIndex& q = basis.points()[j];
        for (const auto& [dm, dn, c] : off) {
            int i = basis.find(q.m + dm, q.n + dn);
            if (i < 0) continue;
            cplx d = basis.values()[i] + k;
            cols[j].emplace_back(i, c / (d * d));
        }
    }
    return [cols, n](const Vec& x, Vec& y) {
        y.setZero(n);
        for (int j = 0; j < n; ++j)
            for (const auto& [i, w] : cols[j]) y[i] += w * x[j];
    };
}

std::vector<double> bands(const TrigPoly2& V, cplx alpha, cplx k, const ModeBasis& basis,
                          int count, int dense_limit) {
    if (count < 1) throw std::invalid_argument("bands: count must be >= 1");
    const int dim = 2 * basis.size();
    std::vector<double> out;
    if (dim <= dense_limit) {
        Eigen::VectorXd s = linalg::singular_values(assemble_ds_matrix(V, alpha, k, basis));
        for (int i = 0; i < count && i < s.size(); ++i) out.push_back(s[s.size() - 1 - i]);
    } else {
        auto r = linalg::smallest_singular_sparse(assemble_ds_sparse(V, alpha, k, basis),
                                                  std::min(count, dim));
        out = r.sigma;
        std::sort(out.begin(), out.end());
        out.resize(std::min<size_t>(out.size(), count));
    }
    return out;
}

std::vector<double> bands(const TrigPoly2& V, cplx alpha, cplx k, double radius, int count,
                          int dense_limit) {
    ModeBasis basis(radius);
    return bands(V, alpha, k, basis, count, dense_limit);
}

namespace {

cplx multiplicity_quadrature(const TrigPoly2& V, cplx alpha, cplx k0, const ModeBasis& basis,
                             double r, int nodes) {
    const int n = basis.size();
    cplx acc = 0;
    const double two_pi = 2 * TriangularLattice::pi();
    for (int j = 0; j < nodes; ++j) {
        double th = two_pi * j / nodes;
        cplx zeta = k0 + r * std::exp(cplx(0, th));
        linalg::DenseLU lu(assemble_p_matrix(V, alpha, zeta, basis));
        Mat dP = Mat::Zero(n, n);
        for (int i = 0; i < n; ++i) dP(i, i) = 2.0 * (basis.values()[i] + zeta);
        Mat X = lu.solve(dP);
        acc += X.trace() * cplx(0, 1) * (zeta - k0) * (two_pi / nodes);
    }
    return acc / cplx(0, two_pi);
}

}  // namespace

KMultiplicity k_multiplicity(const TrigPoly2& V, cplx alpha, cplx k0, double radius,
                             double contour_radius, int nodes) {
    ModeBasis basis(radius);
    cplx m1 = multiplicity_quadrature(V, alpha, k0, basis, contour_radius, nodes);
    cplx m2 = multiplicity_quadrature(V, alpha, k0, basis, contour_radius, 2 * nodes);
    KMultiplicity out;
    out.value = int(std::lround(m2.real()));
    out.integrality = std::abs(m2 - cplx(double(out.value), 0.0));
    out.richardson = std::abs(m2 - m1);
    if (out.integrality > 0.05)
        throw std::runtime_error("k_multiplicity: quadrature failed to produce an integer");
    return out;
}

SpMat sector_basis(const ModeBasis& basis, int ell) {
    ell = ((ell % 6) + 6) % 6;
    const cplx tau = TriangularLattice::tau();
    const int n = basis.size();
    std::vector<bool> seen(n, false);
    std::vector<Eigen::Triplet<cplx>> trip;
    int ncols = 0;
    const double inv = 1.0 / std::sqrt(6.0);
    for (int i = 0; i < n; ++i) {
        if (seen[i]) continue;
        // orbit of p under conj(tau); u in sector ell has c_{tau r} = tau^ell c_r,
        // i.e. along the orbit p_j = conj(tau)^j p_0 the coefficients are tau^{-ell j}
        std::vector<int> orbit;
        DualIndex cur = basis.points()[i];
        for (int t = 0; t < 6; ++t) {
            int j = basis.find(cur.m, cur.n);
            if (j < 0) throw std::logic_error("sector_basis: mode set not rotation closed");
            if (seen[j]) break;
            seen[j] = true;
            orbit.push_back(j);
            cur = mul_tau_bar(cur);
        }
        if (orbit.size() == 1) {  // p = 0, lives in sector 0 only
            if (ell == 0) trip.emplace_back(orbit[0], ncols++, cplx(1, 0));
            continue;
        }
        cplx step(1, 0);
        for (int t = 0; t < ell; ++t) step *= std::conj(tau);  // tau^{-ell}
        cplx phase(1, 0);
        for (size_t t = 0; t < orbit.size(); ++t) {
            trip.emplace_back(orbit[t], ncols, phase * inv);
            phase *= step;
        }
        ++ncols;
    }
    SpMat B(n, ncols);
    B.setFromTriplets(trip.begin(), trip.end());
    return B;
}

Mat sector_block_p(const TrigPoly2& V, cplx alpha, const ModeBasis& basis, int ell) {
    SpMat Bd = sector_basis(basis, ell);
    SpMat Br = sector_basis(basis, ell + 2);
    SpMat P = assemble_p_sparse(V, alpha, 0.0, basis);
    return Mat(Br.adjoint() * P * Bd);
}

Mat sector_block_ds(const TrigPoly2& V, cplx alpha, const ModeBasis& basis, int ell) {
    const int n = basis.size();
    SpMat D = assemble_ds_sparse(V, alpha, 0.0, basis);
    auto two_comp = [&](int l) {
        SpMat B1 = sector_basis(basis, l + 1);
        SpMat B2 = sector_basis(basis, l);
        SpMat B(2 * n, B1.cols() + B2.cols());
        std::vector<Eigen::Triplet<cplx>> trip;
        for (int c = 0; c < B1.outerSize(); ++c)
            for (SpMat::InnerIterator it(B1, c); it; ++it)
                trip.emplace_back(int(it.row()), int(it.col()), it.value());
        for (int c = 0; c < B2.outerSize(); ++c)
            for (SpMat::InnerIterator it(B2, c); it; ++it)
                trip.emplace_back(n + int(it.row()), int(B1.cols()) + int(it.col()), it.value());
        B.setFromTriplets(trip.begin(), trip.end());
        return B;
    };
    SpMat Bd = two_comp(ell), Br = two_comp(ell + 1);
    return Mat(Br.adjoint() * D * Bd);
}

}  // namespace flatband
