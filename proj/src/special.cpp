#include "flatband/special.hpp"

#include <cmath>
#include <stdexcept>

#include "flatband/ode.hpp"

namespace flatband {

namespace {

using cplxl = std::complex<long double>;
const double PI = TriangularLattice::pi();

// Ai(0) and -Ai'(0)
const double AI0 = 0.35502805388781723926;
const double AIP0 = 0.25881940379280679841;

// regime radii: the Maclaurin series cancels like e^{2 Re zeta}, the
// asymptotic series bottoms out at ~e^{-2|zeta|}; in between the Airy
// equation is continued along the ray in the stable direction.
const double AIRY_SERIES_R = 5.0;
const double AIRY_ASYM_R = 9.5;

AiryValue airy_series(cplx xi) {
    cplxl x(xi.real(), xi.imag());
    cplxl x3 = x * x * x;
    // f = 1 + ..., g = xi + ...; Ai = AI0 f - AIP0 g
    cplxl a = 1.0L, b = x;
    cplxl f = a, g = b;
    for (int k = 0; k < 200; ++k) {
        a *= x3 / cplxl((3.0L * k + 2) * (3.0L * k + 3), 0.0L);
        b *= x3 / cplxl((3.0L * k + 3) * (3.0L * k + 4), 0.0L);
        f += a;
        g += b;
        if (std::abs(a) + std::abs(b) < 1e-40L * (std::abs(f) + std::abs(g) + 1.0L)) break;
    }
    // f' = xi^2/2 (1 + ...), g' = 1 + ...
    cplxl fp, gp;
    {
        cplxl c = x * x / 2.0L, s = c;
        for (int k = 0; k < 200 && std::abs(c) > 1e-40L * (std::abs(s) + 1.0L); ++k) {
            c *= x3 / cplxl((3.0L * k + 3) * (3.0L * k + 5), 0.0L);
            s += c;
        }
        fp = s;
    }
    {
        cplxl d = 1.0L, s = d;
        for (int k = 0; k < 200 && std::abs(d) > 1e-40L * (std::abs(s) + 1.0L); ++k) {
            d *= x3 / cplxl((3.0L * k + 1) * (3.0L * k + 3), 0.0L);
            s += d;
        }
        gp = s;
    }
    cplxl ai = cplxl(AI0, 0.0L) * f - cplxl(AIP0, 0.0L) * g;
    cplxl aip = cplxl(AI0, 0.0L) * fp - cplxl(AIP0, 0.0L) * gp;
    return {cplx(double(ai.real()), double(ai.imag())),
            cplx(double(aip.real()), double(aip.imag()))};
}

// single-exponential expansion, |arg xi| <= 2 pi/3
AiryValue airy_asymptotic(cplx xi) {
    cplx sq = std::sqrt(xi);
    cplx zeta = 2.0 / 3.0 * xi * sq;
    cplx u = 1, su = 1, sv = 1;
    double prev = 1e300;
    for (int m = 1; m <= 120; ++m) {
        double num = (6.0 * m - 5) * (6.0 * m - 1);
        u *= -num / (72.0 * m) / zeta;
        if (std::abs(u) > prev) break;
        prev = std::abs(u);
        su += u;
        sv += u * (6.0 * m + 1) / (1.0 - 6.0 * m);
        if (std::abs(u) < 1e-19 * std::abs(su)) break;
    }
    cplx pref = std::exp(-zeta) / (2.0 * std::sqrt(PI));
    return {pref * su / std::pow(xi, 0.25), -pref * std::pow(xi, 0.25) * sv};
}

// continuation of (Ai, Ai') along the ray through xi, |arg xi| <= 2 pi/3.
// For Re zeta >= 0 the function is recessive outward, so integrate inward
// from an asymptotic anchor; otherwise it is dominant outward and the series
// anchor is integrated outward.
AiryValue airy_midrange(cplx xi) {
    const double r = std::abs(xi);
    cplx dirn = xi / r;
    const bool recessive = std::abs(std::arg(xi)) <= PI / 3.0;
    double r0 = recessive ? AIRY_ASYM_R + 0.3 : AIRY_SERIES_R;
    AiryValue a = recessive ? airy_asymptotic(r0 * dirn) : airy_series(r0 * dirn);
    auto rhs = [&](double t, const Eigen::VectorXcd& y, Eigen::VectorXcd& dy) {
        cplx z = t * dirn;
        dy[0] = y[1];
        dy[1] = dirn * dirn * z * y[0];  // Ai'' = xi Ai with chain rule in t
    };
    Eigen::VectorXcd y(2);
    y << a.ai, a.aip * dirn;
    OdeOptions opt;
    opt.rtol = 1e-13;
    opt.atol = 1e-300;  // pure relative control; values span many decades
    Eigen::VectorXcd out = integrate_ode(rhs, r0, r, y, opt);
    return {out[0], out[1] / dirn};
}

AiryValue airy_principal_sector(cplx xi) {
    const double r = std::abs(xi);
    if (r <= AIRY_SERIES_R) return airy_series(xi);
    if (r >= AIRY_ASYM_R) return airy_asymptotic(xi);
    return airy_midrange(xi);
}

}  // namespace

AiryValue airy(cplx xi) {
    if (std::abs(xi) <= AIRY_SERIES_R) return airy_series(xi);
    if (std::abs(std::arg(xi)) <= 2.0 * PI / 3.0 + 1e-14) return airy_principal_sector(xi);
    // connection: Ai(xi) = -omega Ai(omega xi) - omega^2 Ai(omega^2 xi);
    // both rotated arguments satisfy |arg| <= 2 pi/3
    const cplx w = TriangularLattice::omega();
    AiryValue p = airy_principal_sector(w * xi);
    AiryValue q = airy_principal_sector(w * w * xi);
    return {-w * p.ai - w * w * q.ai, -w * w * p.aip - w * q.aip};
}

AiryValue airy_sym(int j, cplx xi) {
    const cplx w = TriangularLattice::omega();
    cplx wj = 1;
    for (int t = 0; t < ((j % 3) + 3) % 3; ++t) wj *= w;
    AiryValue out{0, 0};
    cplx rot = 1, coef = 1;  // omega^k, omega^{kj}
    for (int k = 0; k < 3; ++k) {
        AiryValue a = airy(rot * xi);
        out.ai += coef * a.ai;
        out.aip += coef * rot * a.aip;
        rot *= w;
        coef *= wj;
    }
    return out;
}

cplx bessel_j_series(double nu, cplx w, int sheet) {
    if (nu + 1.0 <= 0.0)
        throw std::invalid_argument("bessel_j_series: order must satisfy nu > -1");
    cplxl half(w.real() / 2.0, w.imag() / 2.0);
    long double mod = std::abs(half);
    if (mod == 0.0L) return nu == 0.0 ? cplx(1, 0) : cplx(0, 0);
    long double lg = std::lgammal((long double)nu + 1.0L);
    long double th = std::arg(half) + 2.0L * (long double)PI * sheet;
    cplxl pref = std::exp(cplxl(nu * std::log(mod), nu * th));
    cplxl q = -half * half;
    cplxl term = std::exp(cplxl(-lg, 0.0L));
    cplxl sum = term;
    for (int m = 1; m <= 300; ++m) {
        term *= q / cplxl((long double)m * ((long double)nu + m), 0.0L);
        sum += term;
        if (std::abs(term) < 1e-40L * std::max<long double>(std::abs(sum), 1e-30L)) break;
    }
    cplxl r = pref * sum;
    return {double(r.real()), double(r.imag())};
}

namespace {

const double HANKEL_SERIES_R = 8.0;
const double HANKEL_ASYM_R = 25.0;

HankelPair hankel16_series(cplx w, int sheet) {
    const double nu = 1.0 / 6.0;
    cplx jp = bessel_j_series(nu, w, sheet);
    cplx jm = bessel_j_series(-nu, w, sheet);
    // J'_mu = J_{mu-1} - (mu/w) J_mu  and  J'_mu = -J_{mu+1} + (mu/w) J_mu
    cplx jp_d = bessel_j_series(nu - 1.0, w, sheet) - nu / w * jp;
    cplx jm_d = -bessel_j_series(1.0 - nu, w, sheet) - nu / w * jm;
    const cplx i(0, 1);
    const double s = std::sin(nu * PI);
    cplx em = std::exp(-i * (nu * PI)), ep = std::exp(i * (nu * PI));
    HankelPair out;
    out.h1 = (jm - em * jp) / (i * s);
    out.h2 = (jm - ep * jp) / (-i * s);
    out.dh1 = (jm_d - em * jp_d) / (i * s);
    out.dh2 = (jm_d - ep * jp_d) / (-i * s);
    return out;
}

struct HankelScalar {
    cplx h, dh;
};

HankelScalar hankel16_asym_one(int kind, cplx w, int sheet) {
    const double nu = 1.0 / 6.0;
    const cplx i(0, 1);
    long double th = std::arg(w) + 2.0L * (long double)PI * sheet;
    long double mod = std::abs(w);
    cplx inv_sq =
        std::exp(cplx(-0.5 * std::log(double(mod)), -0.5 * double(th))) * std::sqrt(2.0 / PI);
    auto expansion = [&](double order) {
        cplx s = 1, term = 1;
        for (int m = 1; m <= 80; ++m) {
            double num = (4.0 * order * order - (2.0 * m - 1) * (2.0 * m - 1));
            cplx next = term * (num / (8.0 * m)) * ((kind == 1 ? i : -i)) / w;
            if (std::abs(next) > std::abs(term)) break;
            term = next;
            s += term;
            if (std::abs(term) < 1e-19) break;
        }
        cplx ph = std::exp((kind == 1 ? i : -i) * (w - cplx(order * PI / 2 + PI / 4)));
        return inv_sq * ph * s;
    };
    HankelScalar out;
    out.h = expansion(nu);
    out.dh = expansion(nu - 1.0) - nu / w * out.h;
    return out;
}

HankelPair hankel16_asymptotic(cplx w, int sheet) {
    HankelScalar a = hankel16_asym_one(1, w, sheet);
    HankelScalar b = hankel16_asym_one(2, w, sheet);
    return {a.h, b.h, a.dh, b.dh};
}

// continuation of a scalar Hankel solution along the ray |w0| -> |w|
HankelScalar hankel16_continue(HankelScalar a, cplx dirn, double r0, double r1) {
    const double nu = 1.0 / 6.0;
    auto rhs = [&](double t, const Eigen::VectorXcd& y, Eigen::VectorXcd& dy) {
        cplx z = t * dirn;
        dy[0] = y[1];
        dy[1] = -(dirn / z) * y[1] - dirn * dirn * (1.0 - nu * nu / (z * z)) * y[0];
    };
    Eigen::VectorXcd y(2);
    y << a.h, a.dh * dirn;
    OdeOptions opt;
    opt.rtol = 1e-13;
    opt.atol = 1e-300;
    Eigen::VectorXcd out = integrate_ode(rhs, r0, r1, y, opt);
    return {out[0], out[1] / dirn};
}

HankelPair hankel16_midrange(cplx w, int sheet) {
    const double r = std::abs(w);
    cplx dirn = w / r;
    // H1 ~ e^{iw} decays upward, H2 ~ e^{-iw} decays downward: track each
    // component in the direction along which it grows
    const double im = w.imag();
    HankelPair out;
    if (sheet != 0 || std::abs(im) <= 3.0) {
        // mild dichotomy: continue the joint series anchor outward
        HankelPair a = hankel16_series(HANKEL_SERIES_R * dirn, sheet);
        HankelScalar h1{a.h1, a.dh1}, h2{a.h2, a.dh2};
        h1 = hankel16_continue(h1, dirn, HANKEL_SERIES_R, r);
        h2 = hankel16_continue(h2, dirn, HANKEL_SERIES_R, r);
        return {h1.h, h2.h, h1.dh, h2.dh};
    }
    const int recessive = im > 0 ? 1 : 2;  // which kind decays outward here
    for (int kind : {1, 2}) {
        HankelScalar s;
        if (kind == recessive) {
            s = hankel16_asym_one(kind, (HANKEL_ASYM_R + 0.5) * dirn, sheet);
            s = hankel16_continue(s, dirn, HANKEL_ASYM_R + 0.5, r);
        } else {
            HankelPair a = hankel16_series(HANKEL_SERIES_R * dirn, sheet);
            s = (kind == 1) ? HankelScalar{a.h1, a.dh1} : HankelScalar{a.h2, a.dh2};
            s = hankel16_continue(s, dirn, HANKEL_SERIES_R, r);
        }
        if (kind == 1) {
            out.h1 = s.h;
            out.dh1 = s.dh;
        } else {
            out.h2 = s.h;
            out.dh2 = s.dh;
        }
    }
    return out;
}

}  // namespace

HankelPair hankel16(cplx w, int sheet) {
    if (std::abs(w) < 1e-12)
        throw std::domain_error("hankel16: argument too close to the origin");
    if (std::abs(w) <= HANKEL_SERIES_R) return hankel16_series(w, sheet);
    if (std::abs(w) >= HANKEL_ASYM_R) return hankel16_asymptotic(w, sheet);
    return hankel16_midrange(w, sheet);
}

}  // namespace flatband
