#include "flatband/potentials.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace flatband {

TrigPoly2 bm_potential() {
    const double pi = TriangularLattice::pi();
    const cplx omega = TriangularLattice::omega();
    // K = (dual_scale/3)*(-2*omega - 1); omega^l K by exact index rotation
    TrigPoly2 U;
    TrigPoly2::Key k{-2, -1};
    cplx coef = cplx(0, -4.0 * pi / 3.0);
    for (int l = 0; l < 3; ++l) {
        U.terms[k] = coef;
        DualIndex d = mul_omega({k.first, k.second});
        k = {d.m, d.n};
        coef *= omega;
    }
    return U;
}

TrigPoly2 henry_potential() {
    TrigPoly2 c = bm_potential().conj_fn();
    TrigPoly2 U = c * c;
    U *= cplx(0, 1);
    return U;
}

TrigPoly2 scalar_V(const TrigPoly2& U) {
    TrigPoly2 V = U * U.reflect();
    // eq-of-symmetry residuals, sampled
    std::mt19937 rng(7101);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    double scale = std::max(V.sup_bound(), 1.0);
    double worst = 0;
    TrigPoly2 Vneg = V.reflect(), Vrot = V.rotate_omega();
    TrigPoly2 Vconj = V.conj_arg().conj_fn();
    const cplx w2 = TriangularLattice::omega() * TriangularLattice::omega();
    for (int i = 0; i < 40; ++i) {
        cplx z(dist(rng), dist(rng));
        cplx v = V.eval(z);
        worst = std::max(worst, std::abs(Vneg.eval(z) - v));
        worst = std::max(worst, std::abs(Vrot.eval(z) - w2 * v));
        worst = std::max(worst, std::abs(Vconj.eval(z) - v));
        worst = std::max(worst, std::abs(V.eval(z + TriangularLattice::omega()) - v));
    }
    if (worst > 1e-10 * scale)
        throw std::domain_error("scalar_V: potential violates the required symmetries");
    return V;
}

TrigPoly2 two_dzbar(const TrigPoly2& f) {
    TrigPoly2 g = f.dzbar2();
    g *= cplx(0, 1);
    return g;
}

HenryFactorization henry_W_and_phi() {
    HenryFactorization out;
    // W = -i conj(V_BM):  W^2 = -conj(V_BM)^2 = U(z)U(-z) for U = i conj(U_BM)^2
    TrigPoly2 vbm = bm_potential() * bm_potential().reflect();
    out.W = vbm.conj_fn();
    out.W *= cplx(0, -1);

    // phi = (8 pi/(3 sqrt 3)) sum_l sin(<z, dual_scale omega^l>)
    const double pi = TriangularLattice::pi();
    const double c = 8.0 * pi / (3.0 * std::sqrt(3.0));
    TrigPoly2::Key k{0, 3};  // dual_scale itself
    for (int l = 0; l < 3; ++l) {
        out.phi.terms[k] += cplx(0, -0.5 * c);
        out.phi.terms[{-k.first, -k.second}] += cplx(0, 0.5 * c);
        DualIndex d = mul_omega({k.first, k.second});
        k = {d.m, d.n};
    }
    return out;
}

TaylorTable taylor_check(const TrigPoly2& f, cplx center, int order) {
    if (order > 4) throw std::invalid_argument("taylor_check: order must be <= 4");
    TaylorTable t;
    std::vector<double> fact{1, 1, 2, 6, 24};
    for (const auto& [key, a] : f.terms) {
        cplx p = TrigPoly2::freq(key);
        cplx base = a * std::exp(cplx(0, 1) * pairing(center, p));
        cplx hj = cplx(0, 0.5) * std::conj(p);  // multiplies w
        cplx hk = cplx(0, 0.5) * p;             // multiplies wbar
        cplx pj = 1;
        for (int j = 0; j <= order; ++j) {
            cplx pk = 1;
            for (int k = 0; j + k <= order; ++k) {
                t.c[{j, k}] += base * pj * pk / (fact[j] * fact[k]);
                pk *= hk;
            }
            pj *= hj;
        }
    }
    return t;
}

}  // namespace flatband
