#pragma once

#include "flatband/lattice.hpp"

namespace flatband {

// Airy function of a complex argument: Maclaurin series for |xi| <= 10,
// asymptotic expansion for larger |xi| with the connection identity
// Ai(xi) + omega Ai(omega xi) + omega^2 Ai(omega^2 xi) = 0 applied when
// |arg xi| > 2 pi/3.  No external special-function library is used.
struct AiryValue {
    cplx ai;
    cplx aip;  // derivative
};
AiryValue airy(cplx xi);
inline cplx airy_ai(cplx xi) { return airy(xi).ai; }

// Rotated combinations Ai_j(xi) = sum_{k=0}^{2} omega^{kj} Ai(omega^k xi);
// Ai_1 vanishes identically, Ai_0 and Ai_2 form a basis of Airy solutions.
AiryValue airy_sym(int j, cplx xi);

// Bessel J_nu by Maclaurin series (any real non-integer order); the branch of
// w^nu is taken with effective argument arg_pr(w) + 2 pi sheet, which covers
// the range -pi < arg w < 2 pi used by the Hankel conventions here.
cplx bessel_j_series(double nu, cplx w, int sheet = 0);

// Hankel functions of order 1/6 and their derivatives.  Series for
// |w| <= 8, large-argument expansion for |w| >= 25, adaptive continuation of
// the Bessel equation along the ray in between.
struct HankelPair {
    cplx h1, h2;    // H^{(1)}_{1/6}, H^{(2)}_{1/6}
    cplx dh1, dh2;  // derivatives in w
};
HankelPair hankel16(cplx w, int sheet = 0);

}  // namespace flatband
