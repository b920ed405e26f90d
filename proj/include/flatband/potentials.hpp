#pragma once

#include "flatband/trig_poly.hpp"

namespace flatband {

// Bistritzer-MacDonald potential
//   U_BM(z) = -(4/3) pi i sum_{l=0..2} omega^l exp(i<z, omega^l K>),
// the lowest-mode potential with U(z+gamma) = e^{i<gamma,K>} U(z),
// U(omega z) = omega U(z), conj(U(conj z)) = -U(-z).
TrigPoly2 bm_potential();

// U(z) = i conj(U_BM(z))^2; inherits the same three symmetries.
TrigPoly2 henry_potential();

// V(z) = U(z) U(-z).  Checks the four identities
// V(z)=V(-z), V(z+gamma)=V(z), V(omega z)=omega^2 V(z), conj(V(conj z))=V(z)
// numerically at random points and throws std::domain_error on violation.
TrigPoly2 scalar_V(const TrigPoly2& U);

// For the potential built on henry_potential() the scalar potential factors
// as V = W^2 with
//   W(z) = 2i (4 pi/3)^2 sum_l omega^l cos(<z, omega^l dual_scale>)
// and the eikonal equation 2 d_zbar phi = W is solved by the real phase
//   phi(z) = (8 pi/(3 sqrt 3)) sum_l sin(<z, dual_scale omega^l>).
// Both identities hold exactly, coefficient by coefficient.
struct HenryFactorization {
    TrigPoly2 W;
    TrigPoly2 phi;
};
HenryFactorization henry_W_and_phi();

// 2 d_zbar f as a trig polynomial (mode p picks up factor i p / ... exact).
TrigPoly2 two_dzbar(const TrigPoly2& f);

// Exact Taylor coefficients c_{jk} of f(center + w) = sum c_{jk} w^j wbar^k,
// obtained by term-wise expansion of the exponentials.
struct TaylorTable {
    std::map<std::pair<int, int>, cplx> c;

    cplx coeff(int j, int k) const {
        auto it = c.find({j, k});
        return it == c.end() ? cplx(0) : it->second;
    }
    cplx constant() const { return coeff(0, 0); }
    double gradient_norm() const { return std::abs(coeff(1, 0)) + std::abs(coeff(0, 1)); }
    // coefficient of |w|^2 (the w wbar term)
    cplx quad_radial() const { return coeff(1, 1); }
    // real coefficient C in C * Im(w^3), valid when the cubic part is a
    // multiple of Im w^3 (checked by purity())
    double cubic_im_coeff() const { return (2.0 * cplx(0, 1) * coeff(3, 0)).real(); }
    double cubic_purity() const { return std::abs(coeff(2, 1)) + std::abs(coeff(1, 2)); }
};
TaylorTable taylor_check(const TrigPoly2& f, cplx center, int order);

}  // namespace flatband
