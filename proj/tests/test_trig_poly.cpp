#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "flatband/trig_poly.hpp"

using namespace flatband;

namespace {
std::mt19937 rng(20250809);
cplx rand_z(double s = 1.0) {
    std::uniform_real_distribution<double> d(-s, s);
    return {d(rng), d(rng)};
}
TrigPoly2 rand_poly(int nterms) {
    TrigPoly2 f;
    std::uniform_int_distribution<int> k(-4, 4);
    std::uniform_real_distribution<double> c(-1, 1);
    for (int i = 0; i < nterms; ++i) f.terms[{k(rng), k(rng)}] += cplx(c(rng), c(rng));
    return f;
}
}  // namespace

TEST_CASE("product is pointwise multiplication") {
    TrigPoly2 f = rand_poly(5), g = rand_poly(6);
    TrigPoly2 h = f * g;
    for (int i = 0; i < 20; ++i) {
        cplx z = rand_z();
        CHECK(std::abs(h.eval(z) - f.eval(z) * g.eval(z)) < 1e-12 * (1 + h.sup_bound()));
    }
}

TEST_CASE("symmetry transforms match their definitions") {
    TrigPoly2 f = rand_poly(7);
    cplx w = TriangularLattice::omega();
    for (int i = 0; i < 20; ++i) {
        cplx z = rand_z();
        CHECK(std::abs(f.reflect().eval(z) - f.eval(-z)) < 1e-12);
        CHECK(std::abs(f.rotate_omega().eval(z) - f.eval(w * z)) < 1e-12);
        CHECK(std::abs(f.conj_fn().eval(z) - std::conj(f.eval(z))) < 1e-12);
        CHECK(std::abs(f.conj_arg().eval(z) - f.eval(std::conj(z))) < 1e-12);
        cplx g = 0.3 * w - 0.7;
        CHECK(std::abs(f.translate(g).eval(z) - f.eval(z + g)) < 1e-11);
    }
}

TEST_CASE("term-wise derivative matches central differences") {
    TrigPoly2 f = rand_poly(6);
    double h = 1e-5;
    for (int i = 0; i < 10; ++i) {
        cplx z = rand_z();
        // 2 D_zbar = (1/i)(d_x + i d_y)
        cplx fd = (f.eval(z + h) - f.eval(z - h)) / (2 * h);
        cplx fdi = (f.eval(z + cplx(0, h)) - f.eval(z - cplx(0, h))) / (2 * h);
        cplx num = (fd + cplx(0, 1) * fdi) / cplx(0, 1);
        CHECK(std::abs(f.eval_dzbar2(z) - num) < 1e-8 * (1 + f.sup_bound() * f.bandwidth()));
        CHECK(std::abs(f.dzbar2().eval(z) - num) < 1e-8 * (1 + f.sup_bound() * f.bandwidth()));
    }
}

TEST_CASE("json round trip") {
    TrigPoly2 f = rand_poly(6);
    TrigPoly2 g = TrigPoly2::from_json(f.to_json());
    for (int i = 0; i < 5; ++i) {
        cplx z = rand_z();
        CHECK(std::abs(f.eval(z) - g.eval(z)) < 1e-12);
    }
    // lattice-periodic polynomials round trip through dual coordinates
    TrigPoly2 per;
    per.terms[TrigPoly2::dual_key(1, 0)] = cplx(0.5, -0.25);
    per.terms[TrigPoly2::dual_key(-1, 1)] = cplx(0, 2);
    CHECK(per.lattice_periodic());
    TrigPoly2 back = TrigPoly2::from_json(per.to_json());
    cplx z0(0.37, -0.11);
    CHECK(std::abs(back.eval(z0) - per.eval(z0)) < 1e-13);
}

TEST_CASE("1d series: algebra and calculus") {
    TrigPoly1 w;
    w.terms[0] = 1.0;
    w.terms[1] = cplx(0.05, 0.02);
    w.terms[-1] = cplx(0.05, -0.02);
    CHECK(std::abs(w.mean() - 1.0) < 1e-15);
    // derivative vs finite differences at a complex point
    cplx z(0.3, 0.21);
    double h = 1e-6;
    cplx fd = (w.eval(z + h) - w.eval(z - h)) / (2 * h);
    CHECK(std::abs(w.derivative().eval(z) - fd) < 1e-7);
    // antiderivative differentiates back
    cplx Phi1 = w.eval_antiderivative(z + h), Phi0 = w.eval_antiderivative(z - h);
    CHECK(std::abs((Phi1 - Phi0) / (2 * h) - w.eval(z)) < 1e-7);
    // periodicity of the function, linear growth of the antiderivative
    CHECK(std::abs(w.eval(z + 1.0) - w.eval(z)) < 1e-14);
    CHECK(std::abs(w.eval_antiderivative(z + 1.0) - w.eval_antiderivative(z) - w.mean()) < 1e-13);
}

TEST_CASE("1d spec parser") {
    TrigPoly1 a = TrigPoly1::parse_spec("1+0.1cos");
    CHECK(std::abs(a.eval(0.25) - (1.0 + 0.1 * std::cos(2 * TriangularLattice::pi() * 0.25))) <
          1e-14);
    TrigPoly1 b = TrigPoly1::parse_spec("1+(0.1+0.05i)cos2");
    cplx z(0.1, 0.0);
    cplx expect = 1.0 + cplx(0.1, 0.05) * std::cos(4 * TriangularLattice::pi() * 0.1);
    CHECK(std::abs(b.eval(z) - expect) < 1e-13);
    TrigPoly1 c = TrigPoly1::parse_spec("0.5sin - 0.25");
    CHECK(std::abs(c.eval(0.125) -
                   (0.5 * std::sin(2 * TriangularLattice::pi() * 0.125) - 0.25)) < 1e-14);
}
