#include "flatband/magic.hpp"

#include <Eigen/SparseLU>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>

#include "flatband/protected_state.hpp"

namespace flatband {

using linalg::Mat;
using linalg::SpMat;
using linalg::Vec;

namespace {

double sampled_sup(const TrigPoly2& V) {
    double m = 0;
    for (int i = 0; i < 48; ++i)
        for (int j = 0; j < 48; ++j)
            m = std::max(m, std::abs(V.eval(double(i) / 48 * TriangularLattice::omega() +
                                            double(j) / 48)));
    return m;
}

std::vector<cplx> birman_eigenvalues(const TrigPoly2& V, cplx k, const ModeBasis& basis,
                                     const FindMagicOptions& opt, double mu_floor) {
    if (basis.size() <= opt.dense_limit)
        return linalg::eigenvalues(assemble_birman(V, k, basis.radius()).matrix);
    auto apply = birman_apply(V, k, basis);
    std::vector<cplx> vals;
    for (unsigned run = 0; run < 2; ++run) {
        auto res = linalg::arnoldi(apply, basis.size(), opt.krylov, opt.seed + run);
        for (size_t i = 0; i < res.values.size(); ++i) {
            cplx mu = res.values[i];
            if (std::abs(mu) < 0.5 * mu_floor) continue;
            if (res.residuals[i] > 1e-8 * std::abs(mu)) continue;
            bool dup = false;
            for (cplx v : vals)
                if (std::abs(v - mu) < 1e-7 * std::abs(mu)) { dup = true; break; }
            if (!dup) vals.push_back(mu);
        }
    }
    return vals;
}

double alpha_scale(const ModeBasis& basis, cplx k) {
    double m = 0;
    for (int i = 0; i < basis.size(); ++i) m = std::max(m, std::norm(basis.values()[i] + k));
    return m;
}

// -V as a sparse operator (for dP/dalpha = -2 alpha V = 2 alpha * minusV)
SpMat minus_v_operator(const TrigPoly2& V, const ModeBasis& basis) {
    SpMat Vs = assemble_p_sparse(V, 1.0, 0.0, basis);
    for (int i = 0; i < basis.size(); ++i) {
        cplx p = basis.values()[i];
        Vs.coeffRef(i, i) -= p * p;
    }
    return Vs;
}

}  // namespace

cplx refine_alpha(const TrigPoly2& V, cplx alpha, cplx k, const ModeBasis& basis, int iters) {
    const bool dense = basis.size() <= 900;
    SpMat mV = minus_v_operator(V, basis);
    Vec v;
    std::mt19937 rng(3301);
    std::normal_distribution<double> gauss(0, 1);
    for (int it = 0; it < iters; ++it) {
        SpMat P = assemble_p_sparse(V, alpha, k, basis);
        if (dense) {
            linalg::Svd s = linalg::svd(Mat(P));
            v = s.V.col(s.V.cols() - 1);
        } else {
            // inverse power iteration on P^H P reusing one factorization;
            // the near-kernel separation makes a few steps plenty
            Eigen::SparseLU<SpMat, Eigen::COLAMDOrdering<int>> lu;
            lu.compute(P);
            if (lu.info() != Eigen::Success) break;
            if (v.size() != basis.size()) {
                v.resize(basis.size());
                for (int i = 0; i < basis.size(); ++i) v[i] = cplx(gauss(rng), gauss(rng));
            }
            for (int p = 0; p < 6; ++p) {
                v = lu.adjoint().solve(v);
                v = lu.solve(v);
                v /= v.norm();
            }
        }
        Vec Pv = P * v;
        double sigma = Pv.norm();
        Vec u;
        if (sigma > 1e-13 * std::max(1.0, alpha_scale(basis, k))) {
            u = Pv / sigma;
        } else {
            u = v;  // kernel reached to machine precision; any unit u works as
                    // the step below vanishes
        }
        cplx F = u.dot(Pv);
        cplx Fp = u.dot(Vec(cplx(2.0, 0.0) * alpha * (mV * v)));
        if (std::abs(Fp) < 1e-300) break;
        cplx step = F / Fp;
        alpha -= step;
        if (std::abs(step) < 1e-12 * std::max(1.0, std::abs(alpha))) break;
    }
    return alpha;
}

int flat_multiplicity(const TrigPoly2& V, cplx alpha, double radius, double threshold,
                      unsigned seed) {
    if (threshold <= 0) {
        double q = std::abs(TriangularLattice::dual_scale());
        threshold = 1e-6 * q * q;
    }
    ModeBasis basis(radius);
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> d(-0.25, 0.25);
    int count = -1;
    for (int t = 0; t < 3; ++t) {
        cplx k = cplx(0.9, 0.7) + cplx(d(rng), d(rng));
        std::vector<double> E;
        if (2 * basis.size() <= 1400) {
            E = bands(V, alpha, k, basis, 5);
        } else {
            // counting only: coarse tolerance on the shifted-inverse spectrum
            auto r = linalg::smallest_singular_sparse(assemble_ds_sparse(V, alpha, k, basis), 5,
                                                      seed + t, 60, 1e-5);
            E = r.sigma;
        }
        int c = 0;
        for (double e : E) c += (e < threshold);
        if (count < 0) count = c;
        else if (count != c)
            throw std::runtime_error("flat_multiplicity: inconsistent count across k samples");
    }
    return count;
}

FindMagicResult find_magic(const TrigPoly2& V, double radius, cplx k1, cplx k2, double alpha_max,
                           const FindMagicOptions& opt) {
    if (k1 == k2) throw std::invalid_argument("find_magic: k1 and k2 must differ");
    FindMagicResult out;
    ModeBasis basis(radius);
    if (V.size() == 0 || V.max_coeff() == 0.0) {
        out.reliability_bound = std::numeric_limits<double>::infinity();
        return out;
    }
    const double sup_v = sampled_sup(V);
    out.reliability_bound = radius / (1.4 * std::sqrt(sup_v));
    const double mu_floor = 1.0 / (alpha_max * alpha_max);
    auto mu1 = birman_eigenvalues(V, k1, basis, opt, mu_floor);
    auto mu2 = birman_eigenvalues(V, k2, basis, opt, mu_floor);

    std::vector<cplx> candidates;
    for (cplx mu : mu1) {
        if (std::abs(mu) < mu_floor) continue;
        double dmin = 1e300;
        for (cplx nu : mu2) dmin = std::min(dmin, std::abs(nu - mu) / std::abs(mu));
        cplx root = 1.0 / std::sqrt(mu);
        if (dmin > opt.match_tol) {
            out.rejected.push_back(root);
            continue;
        }
        for (cplx alpha : {root, -root}) {
            bool dup = false;
            for (cplx c : candidates)
                if (std::abs(c - alpha) < 1e-7 * std::max(1.0, std::abs(alpha))) { dup = true; break; }
            if (!dup) candidates.push_back(alpha);
        }
    }

    const double q = std::abs(TriangularLattice::dual_scale());
    for (cplx alpha0 : candidates) {
        MagicAlpha rec;
        rec.k1 = k1;
        rec.k2 = k2;
        // candidate-sized working radius: the kernel state of a smaller
        // coupling converges at a proportionally smaller truncation
        double r_need = std::min(radius, 1.55 * std::sqrt(sup_v) * std::abs(alpha0) + 2.5 * q);
        ModeBasis rbasis(std::max(4.0 * q, r_need));
        rec.alpha = opt.refine ? refine_alpha(V, alpha0, k1, rbasis) : alpha0;
        if (std::abs(rec.alpha) > alpha_max) continue;
        if (std::abs(rec.alpha.imag()) < 1e-9 * std::max(1.0, std::abs(rec.alpha)))
            rec.alpha = cplx(rec.alpha.real(), 0.0);
        cplx mu = 1.0 / (rec.alpha * rec.alpha);
        double dmin = 1e300;
        for (cplx nu : mu2) dmin = std::min(dmin, std::abs(nu - mu) / std::abs(mu));
        rec.match_residual = dmin;
        rec.truncation_warning = std::abs(rec.alpha) > 0.8 * out.reliability_bound;
        if (rbasis.size() <= opt.dense_limit) {
            Eigen::VectorXd s =
                linalg::singular_values(assemble_p_matrix(V, rec.alpha, k2, rbasis));
            rec.residual = s[s.size() - 1];
        } else {
            auto r =
                linalg::smallest_singular_sparse(assemble_p_sparse(V, rec.alpha, k2, rbasis), 1);
            rec.residual = r.sigma[0];
        }
        if (opt.multiplicities) {
            double thr = opt.mult_threshold > 0 ? opt.mult_threshold : 1e-6 * q * q;
            try {
                rec.multiplicity = std::max(
                    1, flat_multiplicity(V, rec.alpha, rbasis.radius(), thr, opt.seed + 7));
            } catch (const std::runtime_error&) {
                // count disagreed across k samples: the root is at the edge of
                // truncation reliability
                rec.multiplicity = 1;
                rec.truncation_warning = true;
            }
        }
        bool dup = false;
        for (const auto& a : out.alphas)
            if (std::abs(a.alpha - rec.alpha) < 1e-6 * std::max(1.0, std::abs(rec.alpha))) {
                dup = true;
                break;
            }
        if (!dup) out.alphas.push_back(rec);
    }
    std::sort(out.alphas.begin(), out.alphas.end(), [](const MagicAlpha& a, const MagicAlpha& b) {
        if (std::abs(std::abs(a.alpha) - std::abs(b.alpha)) > 1e-12)
            return std::abs(a.alpha) < std::abs(b.alpha);
        return std::arg(a.alpha) < std::arg(b.alpha);
    });
    return out;
}

TrichotomyClass classify_alpha(const TrigPoly2& V, cplx alpha, double radius,
                               const ClassifyOptions& opt) {
    TrichotomyClass out;
    ModeBasis basis(radius);
    const double q = std::abs(TriangularLattice::dual_scale());
    const double flat_tol = opt.flat_tol > 0 ? opt.flat_tol : 1e-5 * q;

    std::mt19937 rng(opt.seed);
    std::uniform_real_distribution<double> d(0.1, 0.6);
    bool flat = true;
    for (int t = 0; t < 5 && flat; ++t) {
        cplx k(d(rng), d(rng));
        flat = bands(V, alpha, k, basis, 1)[0] < flat_tol;
    }
    if (flat) {
        out.kind = TrichotomyClass::FlatBand;
        out.flat_multiplicity = std::max(1, flat_multiplicity(V, alpha, radius));
        return out;
    }

    std::vector<double> logk, logE, s1_ratio, s2_ratio;
    const std::vector<double> radii{1e-3 * q, 3.16e-3 * q, 1e-2 * q};
    double E3_at_0 = bands(V, alpha, 0.0, basis, 3)[2];
    for (int dir = 0; dir < opt.directions; ++dir) {
        double th = 2 * TriangularLattice::pi() * (dir + 0.171) / opt.directions;
        for (double r : radii) {
            cplx k = r * std::exp(cplx(0, th));
            auto E = bands(V, alpha, k, basis, 2);
            logk.push_back(std::log(r));
            logE.push_back(std::log(std::max(E[0], 1e-300)));
            s1_ratio.push_back(E[0] / r);
            s2_ratio.push_back(E[1] / r);
        }
    }
    double n = double(logk.size()), sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (size_t i = 0; i < logk.size(); ++i) {
        sx += logk[i];
        sy += logE[i];
        sxx += logk[i] * logk[i];
        sxy += logk[i] * logE[i];
    }
    out.exponent = (n * sxy - sx * sy) / (n * sxx - sx * sx);

    if (out.exponent > 1.8 && out.exponent < 2.2) {
        out.kind = TrichotomyClass::Generic;
        double acc = 0;
        for (size_t i = 0; i < logk.size(); ++i) acc += std::exp(logE[i] - 2 * logk[i]);
        out.quadratic_coeff = acc / n;
        return out;
    }
    if (out.exponent > 0.8 && out.exponent < 1.2 && E3_at_0 > 0.01 * q) {
        out.kind = TrichotomyClass::DiracPoint;
        out.slope1 = std::accumulate(s1_ratio.begin(), s1_ratio.end(), 0.0) / n;
        out.slope2 = std::accumulate(s2_ratio.begin(), s2_ratio.end(), 0.0) / n;
        auto u = sector_kernel_state(V, alpha, basis, 0);
        auto v = sector_kernel_state(V, alpha, basis, -1);
        auto wr = wronskian(u, v);
        out.wronskian_slope = 0.5 * std::sqrt(3.0) * std::abs(wr.value);
        return out;
    }
    throw std::runtime_error("classify_alpha: ambiguous classification (exponent " +
                             std::to_string(out.exponent) + ")");
}

std::vector<double> locate_b_set(const TrigPoly2& V, double alpha_min, double alpha_max,
                                 double radius, double scan_step) {
    ModeBasis basis(radius);
    auto block_sv = [&](double a) {
        Eigen::VectorXd s = linalg::singular_values(sector_block_p(V, a, basis, -1));
        return s[s.size() - 1];
    };
    std::vector<double> alphas, svs;
    for (double a = alpha_min; a <= alpha_max + 1e-12; a += scan_step) {
        alphas.push_back(a);
        svs.push_back(block_sv(a));
    }
    SpMat Bd = sector_basis(basis, -1), Br = sector_basis(basis, 1);
    SpMat mV = minus_v_operator(V, basis);
    Mat dblk_scaled = Mat(Br.adjoint() * mV * Bd);  // times 2 alpha = d(block)/d alpha
    std::vector<double> out;
    for (size_t i = 1; i + 1 < svs.size(); ++i) {
        if (!(svs[i] < svs[i - 1] && svs[i] < svs[i + 1])) continue;
        if (svs[i] > 0.5 * std::max(svs[i - 1], svs[i + 1])) continue;
        double a = alphas[i];
        for (int it = 0; it < 25; ++it) {
            Mat blk = sector_block_p(V, a, basis, -1);
            linalg::Svd s = linalg::svd(blk);
            int last = int(s.sigma.size()) - 1;
            Vec u = s.U.col(last), v = s.V.col(last);
            cplx F = u.dot(blk * v);
            cplx Fp = u.dot(Vec(cplx(2.0 * a, 0.0) * (dblk_scaled * v)));
            if (std::abs(Fp) < 1e-300) break;
            double step = (F / Fp).real();
            a -= step;
            if (std::abs(step) < 1e-12 * std::max(1.0, a)) break;
        }
        if (a > alpha_min && a < alpha_max &&
            block_sv(a) < 1e-7 * std::max(1.0, svs[i - 1])) {
            bool dup = false;
            for (double b : out) dup = dup || std::abs(b - a) < 1e-6;
            if (!dup) out.push_back(a);
        }
    }
    return out;
}

SpacingReport spacing_report(const std::vector<MagicAlpha>& alphas) {
    std::vector<std::pair<double, int>> reals;
    for (const auto& a : alphas)
        if (a.alpha.real() > 0 && std::abs(a.alpha.imag()) < 1e-8 * std::max(1.0, a.alpha.real()))
            reals.push_back({a.alpha.real(), a.multiplicity});
    std::sort(reals.begin(), reals.end());
    int total = 0;
    for (auto& [a, m] : reals) total += m;
    if (total < 4) throw std::invalid_argument("spacing_report: need at least 4 real magic values");
    SpacingReport rep;
    int running = 1;
    double prev = 0;
    for (size_t i = 0; i < reals.size(); ++i) {
        SpacingRow row;
        row.k = running;
        row.alpha = reals[i].first;
        row.gap = (i == 0) ? 0.0 : reals[i].first - prev;
        prev = reals[i].first;
        rep.rows.push_back(row);
        running += reals[i].second;
    }
    int ng = int(rep.rows.size()) - 1;
    if (ng >= 3)
        rep.asymptote = (rep.rows[ng].gap + rep.rows[ng - 1].gap + rep.rows[ng - 2].gap) / 3.0;
    else if (ng >= 1)
        rep.asymptote = rep.rows[ng].gap;
    return rep;
}

}  // namespace flatband
