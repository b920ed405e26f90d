#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "flatband/magic.hpp"
#include "flatband/potentials.hpp"

using namespace flatband;

namespace {
const double QLEN = std::abs(TriangularLattice::dual_scale());
const cplx K1(0.31, 0.17), K2(-0.23, 0.41);
}  // namespace

TEST_CASE("zero potential has no magic alphas") {
    TrigPoly2 zero;
    auto res = find_magic(zero, 5.0 * QLEN, K1, K2, 3.0);
    CHECK(res.alphas.empty());
}

TEST_CASE("henry potential: first real magic values and their structure") {
    TrigPoly2 V = scalar_V(henry_potential());
    auto res = find_magic(V, 10.0 * QLEN, K1, K2, 0.7);
    // expected real positives at this window
    std::vector<double> expect{0.1395, 0.3803, 0.6281};
    for (double e : expect) {
        bool found = false;
        for (const auto& a : res.alphas)
            if (std::abs(a.alpha - cplx(e, 0)) < 2e-3) {
                found = true;
                CHECK(a.multiplicity == 2);
                CHECK(a.residual < 1e-6);
            }
        CHECK_MESSAGE(found, "missing table value ", e);
    }
    // symmetry closure: -alpha and conj alpha also present
    for (const auto& a : res.alphas) {
        bool neg = false, cnj = false;
        for (const auto& b : res.alphas) {
            if (std::abs(b.alpha + a.alpha) < 1e-6 * std::max(1.0, std::abs(a.alpha))) neg = true;
            if (std::abs(b.alpha - std::conj(a.alpha)) < 1e-6 * std::max(1.0, std::abs(a.alpha)))
                cnj = true;
        }
        CHECK(neg);
        CHECK(cnj);
    }
}

TEST_CASE("refined alphas satisfy the flatness residual at held-out k") {
    TrigPoly2 V = scalar_V(henry_potential());
    ModeBasis basis(9.0 * QLEN);
    cplx alpha = refine_alpha(V, cplx(0.139, 0.0), K1, basis);
    CHECK(std::abs(alpha - cplx(0.139507, 0)) < 5e-5);
    // smallest singular value of P at two held-out k's, relative to the scale
    for (cplx k : {cplx(0.52, -0.34), cplx(-0.61, 0.12)}) {
        linalg::Mat P = assemble_p_matrix(V, alpha, k, basis);
        Eigen::VectorXd s = linalg::singular_values(P);
        CHECK(s[s.size() - 1] < 1e-9 * s[0]);
    }
}

TEST_CASE("spacing report matches the gap structure") {
    std::vector<MagicAlpha> list;
    for (double a : {0.1395, 0.3803, 0.6281}) {
        MagicAlpha rec;
        rec.alpha = a;
        rec.multiplicity = 2;
        list.push_back(rec);
        rec.alpha = -a;
        list.push_back(rec);
    }
    auto rep = spacing_report(list);
    REQUIRE(rep.rows.size() == 3);
    CHECK(rep.rows[0].k == 1);
    CHECK(rep.rows[1].k == 3);
    CHECK(rep.rows[2].k == 5);
    CHECK(rep.rows[1].gap == doctest::Approx(0.2408).epsilon(1e-3));
    CHECK(rep.rows[2].gap == doctest::Approx(0.2478).epsilon(1e-3));

    std::vector<MagicAlpha> two(list.begin(), list.begin() + 1);
    CHECK_THROWS(spacing_report(two));
}

TEST_CASE("bm scalar: first real magic pair is double") {
    TrigPoly2 V = scalar_V(bm_potential());
    auto res = find_magic(V, 8.0 * QLEN, K1, K2, 2.0);
    bool found = false;
    for (const auto& a : res.alphas)
        if (std::abs(a.alpha - cplx(1.4691, 0)) < 2e-3) {
            found = true;
            CHECK(a.multiplicity == 2);
        }
    CHECK(found);
}

TEST_CASE("trichotomy: generic alpha has quadratic band touching") {
    TrigPoly2 V = scalar_V(henry_potential());
    auto cls = classify_alpha(V, 0.26, 8.0 * QLEN);
    CHECK(cls.kind == TrichotomyClass::Generic);
    CHECK(cls.exponent == doctest::Approx(2.0).epsilon(0.05));
}

TEST_CASE("trichotomy: magic alpha classified flat with multiplicity 2") {
    TrigPoly2 V = scalar_V(henry_potential());
    auto cls = classify_alpha(V, 0.1395068, 9.0 * QLEN);
    CHECK(cls.kind == TrichotomyClass::FlatBand);
    CHECK(cls.flat_multiplicity == 2);
}

TEST_CASE("b-set location and double dirac cone") {
    TrigPoly2 V = scalar_V(henry_potential());
    double radius = 10.0 * QLEN;
    auto bset = locate_b_set(V, 1.2, 1.8, radius, 0.01);
    REQUIRE(bset.size() >= 1);
    double aB = bset[0];
    auto cls = classify_alpha(V, aB, radius);
    CHECK(cls.kind == TrichotomyClass::DiracPoint);
    CHECK(cls.exponent == doctest::Approx(1.0).epsilon(0.05));
    CHECK(cls.slope1 > 0);
    // double cone: both smallest bands share the slope
    CHECK(cls.slope2 == doctest::Approx(cls.slope1).epsilon(0.02));
    // the wronskian prediction converges to the measured slope with radius;
    // at this moderate truncation they already agree to ~10%
    CHECK(cls.wronskian_slope == doctest::Approx(cls.slope1).epsilon(0.15));
}

TEST_CASE("k multiplicity is 2 at k=0 away from the magic set, including b-points") {
    // the algebraic k-multiplicity at k = 0 equals 2 for every alpha outside
    // the magic set: a Jordan pair at generic alpha, two independent kernel
    // directions at a double Dirac point
    TrigPoly2 V = scalar_V(henry_potential());
    double radius = 10.0 * QLEN;
    auto bset = locate_b_set(V, 1.2, 1.8, radius, 0.01);
    REQUIRE(bset.size() >= 1);
    auto m = k_multiplicity(V, bset[0], 0.0, radius, 0.3 * QLEN);
    CHECK(m.value == 2);
    CHECK(m.integrality < 0.02);
}

TEST_CASE("rejected candidates concentrate near the truncation edge") {
    TrigPoly2 V = scalar_V(henry_potential());
    // deliberately small radius so that spurious candidates exist in-window
    auto res = find_magic(V, 5.0 * QLEN, K1, K2, 2.4, [] {
        FindMagicOptions o;
        o.refine = false;
        o.multiplicities = false;
        return o;
    }());
    // every rejected candidate within the window lies in the outer part of
    // the reliability range
    for (cplx r : res.rejected)
        if (std::abs(r) < 2.4) CHECK(std::abs(r) > 0.45 * res.reliability_bound);
}
