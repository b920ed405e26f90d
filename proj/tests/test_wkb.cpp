#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "flatband/magic.hpp"
#include "flatband/potentials.hpp"
#include <random>

#include "flatband/wkb.hpp"

using namespace flatband;

namespace {
const double PI = TriangularLattice::pi();
const double QLEN = std::abs(TriangularLattice::dual_scale());
}  // namespace

TEST_CASE("corner model constants and the rescaling identity") {
    CornerModel cm;
    // Taylor coefficients of V at the stacking point match (-i a, b)
    TrigPoly2 V = scalar_V(bm_potential());
    TaylorTable t = taylor_check(V, TriangularLattice::z_S(), 2);
    CHECK(std::abs(t.coeff(0, 1) - cplx(0, -cm.a)) < 1e-8 * cm.a);
    CHECK(std::abs(t.coeff(2, 0) - cplx(cm.b, 0)) < 1e-8 * cm.b);
    // the rescaling z = -i beta w sends the model to d_wbar^2 - wbar + c a^{-2/3} w^2:
    // beta is pinned by alpha^2 a beta^3/4 = 1 and c by alpha^2 b beta^4/4 = c alpha^{-2/3}
    for (double alpha : {1.0, 3.7, 12.0}) {
        double beta = cm.beta(alpha);
        CHECK(alpha * alpha * cm.a * beta * beta * beta / 4.0 == doctest::Approx(1.0).epsilon(1e-12));
        double lhs = alpha * alpha * cm.b * std::pow(beta, 4) / 4.0;
        CHECK(lhs == doctest::Approx(cm.c * std::pow(alpha, -2.0 / 3.0)).epsilon(1e-12));
    }
}

TEST_CASE("airy decomposition tracks the corner zeros of the state") {
    TrigPoly2 V = scalar_V(bm_potential());
    // the first real magic value of this model sits at 1.4691; g0(0, alpha)
    // is proportional to the state at the stacking point and dips there
    double radius = 10.0 * QLEN;
    ModeBasis basis(radius);
    cplx am = refine_alpha(V, cplx(1.4691, 0.0), cplx(0.31, 0.17), basis);
    std::map<double, double> g0abs;
    for (double alpha : {1.1, am.real(), 1.9}) {
        auto st = protected_state(V, alpha, radius);
        auto dec = airy_decompose(st, alpha);
        g0abs[alpha] = std::abs(dec.g0);
        // reality of g0, g2 for real alpha
        CHECK(std::abs(dec.g0.imag()) < 1e-6 * std::abs(dec.g0) + 1e-12);
        CHECK(std::abs(dec.g2) > 1e-12);
        CHECK(std::abs(dec.g2.imag()) < 1e-4 * std::abs(dec.g2));
    }
    CHECK(g0abs[am.real()] < 3e-4 * g0abs[1.1]);
    CHECK(g0abs[am.real()] < 3e-4 * g0abs[1.9]);
}

TEST_CASE("airy decomposition decays with alpha") {
    TrigPoly2 V = scalar_V(bm_potential());
    auto g0_at = [&](double alpha) {
        double radius = std::max(10.0, 2.0 * alpha) * QLEN;
        auto st = protected_state(V, alpha, radius);
        return std::abs(airy_decompose(st, alpha).g0);
    };
    // midpoints between magic values, increasing alpha
    double a = g0_at(2.9), b = g0_at(6.0);
    CHECK(b < a);
}

TEST_CASE("airy decomposition guards its window") {
    TrigPoly2 V = scalar_V(bm_potential());
    auto st = protected_state(V, 0.4, 6.0 * QLEN);
    CHECK_THROWS(airy_decompose(st, 0.4));  // beta too large at small alpha
}

TEST_CASE("edge ansatz reduces to the cosine profile on the edge") {
    auto [W, phi] = henry_W_and_phi();
    for (double t : {1.1, 1.42, 1.77}) {
        cplx z(0, t / std::sqrt(3.0));
        for (double alpha : {0.7, 1.3}) {
            cplx e = edge_ansatz(z, alpha);
            cplx expect = std::cos(alpha * phi.eval(z).real());
            CHECK(std::abs(e - expect) < 1e-10);
        }
    }
    // W_hol equals W on the edge and is holomorphic off it
    for (double t : {1.05, 1.5, 1.93}) {
        cplx z(0, t / std::sqrt(3.0));
        CHECK(std::abs(edge_w_hol(z) - W.eval(z)) < 1e-10 * W.sup_bound());
    }
}

TEST_CASE("edge ansatz matches the protected state on the edge segment") {
    TrigPoly2 V = scalar_V(henry_potential());
    double prev_err = 1.0;
    for (double alpha : {1.0, 2.0, 4.0}) {
        double radius = std::max(12.0, 11.0 * alpha) * QLEN;
        auto st = protected_state(V, alpha, radius);
        const int n = 60;
        cplx num = 0;
        double den = 0;
        std::vector<cplx> u(n), e(n);
        for (int j = 0; j < n; ++j) {
            double t = 1.0 + (j + 0.5) / n;
            cplx z(0, t / std::sqrt(3.0));
            u[j] = st.eval(z);
            e[j] = edge_ansatz(z, alpha);
            num += std::conj(e[j]) * u[j];
            den += std::norm(e[j]);
        }
        cplx c = num / den;
        double sup_d = 0, sup_u = 0;
        for (int j = 0; j < n; ++j) {
            sup_d = std::max(sup_d, std::abs(u[j] - c * e[j]));
            sup_u = std::max(sup_u, std::abs(u[j]));
        }
        double err = sup_d / sup_u;
        if (alpha == 1.0) CHECK(err < 0.10);
        CHECK(err < prev_err);
        prev_err = err;
    }
}

TEST_CASE("center ansatz solves the frozen model exactly") {
    const double a = 32.0 * std::pow(PI, 4) / 27.0;
    std::mt19937 rng(314);
    std::uniform_real_distribution<double> rd(0.02, 0.14), ad(-PI / 6 + 0.01, PI / 6 - 0.01);
    for (double alpha : {1.0, 2.5}) {
        for (int i = 0; i < 12; ++i) {
            cplx z = rd(rng) * std::exp(cplx(0, ad(rng)));
            if (i % 2) z = -z;
            auto e = center_ansatz_full(z, alpha);
            cplx zb = std::conj(z);
            cplx W02 = -36.0 * a * a * zb * zb * zb * zb;
            cplx resid = -4.0 * e.dzbar2 - alpha * alpha * W02 * e.value;
            double scale = std::abs(4.0 * e.dzbar2) + std::abs(alpha * alpha * W02 * e.value) + 1e-30;
            CHECK(std::abs(resid) / scale < 1e-8);
        }
    }
}

TEST_CASE("center ansatz is smooth across the rotation seam and real") {
    for (double alpha : {1.0, 2.0}) {
        for (double r : {0.03, 0.08, 0.13}) {
            cplx zp = r * std::exp(cplx(0, PI / 6.0 - 1e-12));
            cplx zm = r * std::exp(cplx(0, PI / 6.0 + 1e-12));
            cplx va = center_ansatz(zp, alpha), vb = center_ansatz(zm, alpha);
            CHECK(std::abs(va - vb) < 1e-8 * std::max(1.0, std::abs(va)));
            // invariance under the full rotation
            cplx rot = std::exp(cplx(0, PI / 3.0));
            CHECK(std::abs(center_ansatz(rot * zp, alpha) - va) <
                  1e-10 * std::max(1.0, std::abs(va)));
            // real valued
            CHECK(std::abs(va.imag()) < 1e-10 * std::max(1.0, std::abs(va)));
        }
    }
}

TEST_CASE("center ansatz oscillation matches the state near the center") {
    // qualitative: count sign changes over Im z in (0.02, 0.15) on the
    // imaginary axis against the protected state
    TrigPoly2 V = scalar_V(henry_potential());
    double alpha = 4.0;
    double radius = 44.0 * QLEN;
    auto st = protected_state(V, alpha, radius);
    auto signs = [&](auto&& f) {
        int c = 0;
        double prev = 0;
        for (int j = 0; j <= 120; ++j) {
            double y = 0.02 + 0.13 * j / 120.0;
            double v = f(cplx(0, y));
            if (j > 0 && prev * v < 0) ++c;
            prev = v;
        }
        return c;
    };
    int ns = signs([&](cplx z) { return st.eval(z).real(); });
    int na = signs([&](cplx z) { return center_ansatz(z, alpha).real(); });
    CHECK(std::abs(ns - na) <= 1);
}

TEST_CASE("quantization heuristic gives 1/4 exactly") {
    auto q = quantization_heuristic();
    CHECK(q.delta_alpha == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(q.phase_span == doctest::Approx(8.0 * PI).epsilon(1e-12));
    CHECK(q.quadrature_span == doctest::Approx(q.phase_span).epsilon(1e-9));
}
