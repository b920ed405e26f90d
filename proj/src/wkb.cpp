#include "flatband/wkb.hpp"

#include <cmath>
#include <stdexcept>

namespace flatband {

namespace {
const double PI = TriangularLattice::pi();
// W(Ai_0, Ai_2) = Ai_0(0) Ai_2'(0) = 9 Ai(0) Ai'(0)
const double AIRY_PAIR_WRONSKIAN = 9.0 * 0.35502805388781723926 * (-0.25881940379280679841);
}  // namespace

AiryDecomposition airy_decompose(const ProtectedState& state, double alpha, double fd_step) {
    if (!(alpha > 0)) throw std::invalid_argument("airy_decompose: alpha must be real positive");
    CornerModel cm;
    const double beta = cm.beta(alpha);
    const double ca = cm.c * std::pow(alpha, -2.0 / 3.0);
    if (beta * 2.5 > 1.0)
        throw std::domain_error("airy_decompose: rescaled window exits the sampling region");
    const cplx zS = TriangularLattice::z_S();

    // v(w, wbar) = u(z_S - i beta w);  d_wbar v = -(beta/2)(2 D_zbar u)
    auto wr_against = [&](int j, cplx w) {
        cplx z = zS - cplx(0, 1) * beta * w;
        cplx xi = std::conj(w) - ca * w * w;
        AiryValue aj = airy_sym(j, xi);
        cplx v = state.eval(z);
        cplx dv = -(beta / 2.0) * state.eval_dzbar2(z);
        return v * aj.aip - dv * aj.ai;  // d_wbar xi = 1
    };

    AiryDecomposition out;
    // g0(0) = Wr(v, Ai_2)(0)/W(Ai_0, Ai_2)
    out.g0 = wr_against(2, 0.0) / AIRY_PAIR_WRONSKIAN;
    // f2(w) = Wr(v, Ai_0)(w)/W(Ai_2, Ai_0) = w g2(w^3): central difference
    double h = fd_step;
    cplx f2p = wr_against(0, h) / (-AIRY_PAIR_WRONSKIAN);
    cplx f2m = wr_against(0, -h) / (-AIRY_PAIR_WRONSKIAN);
    out.g2 = (f2p - f2m) / (2.0 * h);
    return out;
}

cplx edge_w_hol(cplx z) {
    // 2i (4 pi/3)^2 (cos(4 pi i z/sqrt3) - cos(2 pi i z/sqrt3)); equals W on
    // the hexagon edge Re z = 0 (mod the lattice)
    const cplx i(0, 1);
    const double c = 2.0 * std::pow(4.0 * PI / 3.0, 2);
    return i * c *
           (std::cos(4.0 * PI * i * z / std::sqrt(3.0)) -
            std::cos(2.0 * PI * i * z / std::sqrt(3.0)));
}

cplx edge_ansatz(cplx z, double alpha) {
    static const HenryFactorization hf = henry_W_and_phi();
    cplx W = hf.W.eval(z);
    cplx ratio = edge_w_hol(z) / W;
    if (ratio.real() <= 0.0)
        throw std::domain_error("edge_ansatz: W_hol/W reached the square root cut");
    return std::sqrt(ratio) * std::cos(alpha * hf.phi.eval(z));
}

CenterEval center_ansatz_full(cplx z, double alpha) {
    // the exact формула lives on the closed sector |arg z| <= pi/6; other
    // points are mapped into it by the hexagonal symmetry z -> e^{-i pi/3} z
    // of the state (the extension is smooth at 0, with seam mismatches that
    // vanish with the rescaled argument)
    if (std::abs(z) < 1e-14) throw std::domain_error("center_ansatz: evaluation at the origin");
    {
        const double argz = std::arg(z);
        int k = int(std::lround(argz / (PI / 3.0)));
        if (k != 0) {
            cplx rot = std::exp(cplx(0, -PI / 3.0 * k));
            CenterEval e = center_ansatz_full(rot * z, alpha);
            // map the zbar derivatives back through the rotation
            cplx rb = std::conj(rot);
            return {e.value, rb * e.dzbar, rb * rb * e.dzbar2};
        }
    }
    const double a = 32.0 * std::pow(PI, 4) / 27.0;
    const cplx i(0, 1);
    const cplx zb = std::conj(z);
    const cplx w1 = i * a * alpha * zb * zb * zb;  // argument of the zbar factors
    const cplx w2 = i * a * alpha * z * z * z;     // argument of the z factors
    // |arg z| <= pi/6 keeps arg w in [0, pi]: principal branch throughout
    HankelPair p1 = hankel16(w1);
    HankelPair p2 = hankel16(w2);

    // second derivatives from the Bessel equation
    auto d2 = [](cplx w, cplx h, cplx dh) {
        const double nu = 1.0 / 6.0;
        return -(dh / w) - (1.0 - nu * nu / (w * w)) * h;
    };

    // zbar-dependent factors: A = H1(w1), D = conj(H2(w2)); the chain rule
    // uses d w1/d zbar = 3 i a alpha zb^2 and d/dzbar conj(g(z)) = conj(dg/dz)
    cplx A = p1.h1;
    cplx dw1 = 3.0 * i * a * alpha * zb * zb;
    cplx ddw1 = 6.0 * i * a * alpha * zb;
    cplx A1 = p1.dh1 * dw1;
    cplx A2 = d2(w1, p1.h1, p1.dh1) * dw1 * dw1 + p1.dh1 * ddw1;

    cplx D = std::conj(p2.h2);
    cplx dw2 = 3.0 * i * a * alpha * z * z;
    cplx ddw2 = 6.0 * i * a * alpha * z;
    cplx D1 = std::conj(p2.dh2 * dw2);
    cplx D2 = std::conj(d2(w2, p2.h2, p2.dh2) * dw2 * dw2 + p2.dh2 * ddw2);

    // z-holomorphic factors (zbar derivative zero); the second product is the
    // full conjugate of the first, making the combination real valued and
    // exactly invariant under the hexagonal rotation
    cplx B = p2.h2;             // H2(w2)
    cplx C = std::conj(p1.h1);  // conj(H1(w1))

    // |z| and its zbar derivatives
    double r = std::abs(z);
    if (r < 1e-14) throw std::domain_error("center_ansatz: evaluation at the origin");
    cplx R = r;
    cplx R1 = z / (2.0 * r);
    cplx R2 = -z * z / (4.0 * r * r * r);

    cplx G = A * B - C * D;
    cplx G1 = A1 * B - C * D1;
    cplx G2 = A2 * B - C * D2;

    CenterEval out;
    out.value = i * R * G;
    out.dzbar = i * (R1 * G + R * G1);
    out.dzbar2 = i * (R2 * G + 2.0 * R1 * G1 + R * G2);
    return out;
}

cplx center_ansatz(cplx z, double alpha) { return center_ansatz_full(z, alpha).value; }

QuantizationHeuristic quantization_heuristic() {
    static const HenryFactorization hf = henry_W_and_phi();
    QuantizationHeuristic out;
    const cplx z1(0, 1.0 / std::sqrt(3.0)), z2(0, 2.0 / std::sqrt(3.0));
    out.phase_span = (hf.phi.eval(z2) - hf.phi.eval(z1)).real();
    // quadrature cross-check of int_1^2 d/dt phi(z(t)) dt by Simpson
    const int n = 256;
    auto dphi = [&](double t) {
        cplx z(0, t / std::sqrt(3.0));
        cplx acc = 0;
        for (const auto& [key, apz] : hf.phi.terms) {
            cplx p = TrigPoly2::freq(key);
            acc += apz * cplx(0, 1) * pairing(cplx(0, 1.0 / std::sqrt(3.0)), p) *
                   std::exp(cplx(0, 1) * pairing(z, p));
        }
        return acc.real();
    };
    double s = dphi(1.0) + dphi(2.0);
    for (int j = 1; j < n; ++j) s += dphi(1.0 + double(j) / n) * ((j % 2) ? 4.0 : 2.0);
    out.quadrature_span = s / (3.0 * n);
    out.delta_alpha = 2.0 * PI / out.phase_span;
    return out;
}

}  // namespace flatband
