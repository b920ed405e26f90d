#pragma once

#include "flatband/potentials.hpp"
#include "flatband/protected_state.hpp"
#include "flatband/special.hpp"

namespace flatband {

// Constants of the corner model near the stacking point:
//   V(z_S + w) = -i a wbar + b w^2 + O(|w|^3)
// and the rescaled operator  d_wbar^2 - wbar + c alpha^{-2/3} w^2 with
// w = i beta(alpha) z and beta = (2/alpha)^{2/3} a^{-1/3}.
struct CornerModel {
    double a = 32.0 * std::pow(TriangularLattice::pi(), 3) / 3.0;
    double b = 32.0 * std::pow(TriangularLattice::pi(), 4) / 9.0;
    // c = 2^{2/3} b a^{-4/3} (= 3^{-2/3}/2), fixed by the rescaling identity
    double c = std::pow(2.0, 2.0 / 3.0) * (32.0 * std::pow(TriangularLattice::pi(), 4) / 9.0) /
               std::pow(32.0 * std::pow(TriangularLattice::pi(), 3) / 3.0, 4.0 / 3.0);
    double beta(double alpha) const {
        return std::pow(2.0 / alpha, 2.0 / 3.0) / std::cbrt(a);
    }
};

// Wronskian extraction of the holomorphic coefficients in the corner
// decomposition v = f0(w) Ai_0(xi) + f2(w) Ai_2(xi), xi = wbar - c a^{-2/3} w^2,
// with f0 = g0(w^3), f2 = w g2(w^3); returns g0(0, alpha) and g2(0, alpha).
struct AiryDecomposition {
    cplx g0;
    cplx g2;
};
AiryDecomposition airy_decompose(const ProtectedState& state, double alpha,
                                 double fd_step = 0.25);

// Edge ansatz for the factorized potential:
//   u_E(z) = (W_hol(z)/W(z))^{1/2} cos(alpha phi(z)),
// W_hol the holomorphic extension of W from the hexagon edge.  Throws if the
// square-root ratio reaches the branch cut on the evaluation point.
cplx edge_ansatz(cplx z, double alpha);
cplx edge_w_hol(cplx z);  // the holomorphic extension itself

// Hankel-based ansatz near the center, an exact solution of the frozen model
// (2 D_zbar)^2 - alpha^2 W_0(z)^2 with W_0 = 2 d_zbar phi_0 and
// phi_0 the cubic part of the phase.  Valid in the corner sectors
// |arg(+-z)| <= pi/6 (+ slack); throws outside.
struct CenterEval {
    cplx value;
    cplx dzbar;   // d/dzbar
    cplx dzbar2;  // d^2/dzbar^2
};
CenterEval center_ansatz_full(cplx z, double alpha);
cplx center_ansatz(cplx z, double alpha);

// Edge-phase quantization: zeros of cos(alpha phi) on the edge are spaced
// pi in alpha*phi, so the magic spacing is 2 pi/(phi(2) - phi(1)) = 1/4.
struct QuantizationHeuristic {
    double delta_alpha;      // 0.25 in closed form
    double phase_span;       // phi(2) - phi(1) = 8 pi
    double quadrature_span;  // the same by numerical quadrature of dphi/dt
};
QuantizationHeuristic quantization_heuristic();

}  // namespace flatband
