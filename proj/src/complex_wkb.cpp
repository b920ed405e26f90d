#include "flatband/complex_wkb.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <stdexcept>

#include "flatband/ode.hpp"

namespace flatband::toy {

namespace {
const double PI = flatband::TriangularLattice::pi();
const double TWO_PI = 2.0 * PI;
}  // namespace

double PathCurve::length() const {
    double s = 0;
    for (size_t i = 0; i + 1 < nodes.size(); ++i) s += std::abs(nodes[i + 1] - nodes[i]);
    return s;
}

void PathCurve::validate() const {
    if (nodes.size() < 2) throw std::invalid_argument("PathCurve: need at least two nodes");
    for (size_t i = 0; i + 1 < nodes.size(); ++i)
        if (std::abs(nodes[i + 1] - nodes[i]) < 1e-14)
            throw std::invalid_argument("PathCurve: degenerate segment");
    // pairwise segment intersection (non-adjacent segments only)
    auto orient = [](cplx a, cplx b, cplx c) {
        double v = ((b - a) * std::conj(c - a)).imag();
        return (v > 1e-15) - (v < -1e-15);
    };
    for (size_t i = 0; i + 1 < nodes.size(); ++i)
        for (size_t j = i + 2; j + 1 < nodes.size(); ++j) {
            if (i == 0 && j + 2 == nodes.size() && nodes.front() == nodes.back()) continue;
            cplx a = nodes[i], b = nodes[i + 1], c = nodes[j], d = nodes[j + 1];
            if (orient(a, b, c) != orient(a, b, d) && orient(c, d, a) != orient(c, d, b))
                throw std::invalid_argument("PathCurve: self-intersecting path");
        }
}

namespace {

// propagate (u1, u1', u2, u2') along one straight segment
Eigen::Matrix2cd propagate_segment(const TrigPoly1& W, cplx za, cplx zb, cplx alpha, double h,
                                   const Eigen::Matrix2cd& init_uz, double rtol) {
    const cplx dz = zb - za;
    const cplx s = alpha / h;
    auto rhs = [&](double t, const Eigen::VectorXcd& y, Eigen::VectorXcd& dy) {
        cplx w = W.eval(za + t * dz);
        cplx f = -(s * s) * w * w * dz * dz;
        dy[0] = y[1];
        dy[1] = f * y[0];
        dy[2] = y[3];
        dy[3] = f * y[2];
    };
    Eigen::VectorXcd y(4);
    // columns of init_uz are (u, u_z); convert u_z to d/dt = u_z * dz
    y << init_uz(0, 0), init_uz(1, 0) * dz, init_uz(0, 1), init_uz(1, 1) * dz;
    OdeOptions opt;
    opt.rtol = rtol;
    opt.atol = 1e-300;
    opt.h_init = 0.01;
    Eigen::VectorXcd out = integrate_ode(rhs, 0.0, 1.0, y, opt);
    Eigen::Matrix2cd res;
    res << out[0], out[2], out[1] / dz, out[3] / dz;
    return res;
}

Eigen::Matrix2cd propagate_path(const TrigPoly1& W, const std::vector<cplx>& nodes, cplx alpha,
                                double h, double rtol) {
    // track (u, u_z) for the two basis data (1,0),(0,1) of (u, h D_z u):
    // h D_z u = (h/i) u_z  =>  u_z = (i/h)(h D_z u)
    Eigen::Matrix2cd cur;
    cur << cplx(1, 0), cplx(0, 0), cplx(0, 0), cplx(0, 1) / h;
    for (size_t i = 0; i + 1 < nodes.size(); ++i)
        cur = propagate_segment(W, nodes[i], nodes[i + 1], alpha, h, cur, rtol);
    Eigen::Matrix2cd M;
    // back to (u, h D_z u) rows
    M << cur(0, 0), cur(0, 1), (h / cplx(0, 1)) * cur(1, 0), (h / cplx(0, 1)) * cur(1, 1);
    return M;
}

}  // namespace

TransitionMatrix transition_matrix(const TrigPoly1& W, cplx z0, cplx z1, cplx alpha, double h,
                                   const PathCurve* path, double rtol) {
    std::vector<cplx> nodes;
    if (path) {
        path->validate();
        if (std::abs(path->nodes.front() - z0) > 1e-12 || std::abs(path->nodes.back() - z1) > 1e-12)
            throw std::invalid_argument("transition_matrix: path endpoints do not match");
        nodes = path->nodes;
    } else {
        nodes = {z0, z1};
    }
    TransitionMatrix out;
    out.z0 = z0;
    out.z1 = z1;
    out.alpha = alpha;
    out.h = h;
    out.M = propagate_path(W, nodes, alpha, h, rtol);
    Eigen::Matrix2cd coarse = propagate_path(W, nodes, alpha, h, rtol * 100);
    out.est_error = (out.M - coarse).norm();
    return out;
}

StokesLoop stokes_loop(const TrigPoly1& W) {
    StokesLoop out;
    out.w0 = W.mean();
    if (std::abs(out.w0) < 1e-14)
        throw std::runtime_error("stokes_loop: zero mean potential (no loop)");
    TrigPoly1 what = W;
    what *= 1.0 / out.w0;

    auto fprime = [&](double t, double f) {
        cplx v = what.eval(cplx(t, f));
        if (v.real() <= 1e-12)
            throw std::runtime_error("stokes_loop: Re(normalized W) <= 0 on the solution");
        return -v.imag() / v.real();
    };
    // integrate f through uniform checkpoints and build the interpolant
    const int M = 1024;
    std::vector<double> fs(M + 1, 0.0);
    auto rhs = [&](double t, const Eigen::VectorXcd& y, Eigen::VectorXcd& dy) {
        dy[0] = fprime(t, y[0].real());
    };
    Eigen::VectorXcd y(1);
    y << cplx(0, 0);
    OdeOptions opt;
    opt.rtol = 1e-13;
    opt.atol = 1e-15;
    for (int j = 1; j <= M; ++j) {
        y = integrate_ode(rhs, double(j - 1) / M, double(j) / M, y, opt);
        fs[j] = y[0].real();
        if (std::abs(fs[j]) > 1.0 + 1e-9)
            throw std::runtime_error("stokes_loop: closure solution left |Im z| <= 1");
    }
    out.closure = std::abs(fs[M] - fs[0]);
    if (out.closure > 1e-8) throw std::runtime_error("stokes_loop: loop failed to close");

    // trigonometric interpolant of f (real, 1-periodic); spectral accuracy
    for (int n = -M / 2 + 1; n < M / 2; ++n) {
        cplx c = 0;
        for (int j = 0; j < M; ++j)
            c += fs[j] * std::exp(cplx(0, -TWO_PI * n * j / double(M)));
        c /= double(M);
        if (std::abs(c) > 1e-15) out.f.terms[n] += c;
    }
    // enforce a real-valued interpolant
    TrigPoly1 fr;
    for (const auto& [n, c] : out.f.terms) {
        fr.terms[n] += 0.5 * c;
        fr.terms[-n] += 0.5 * std::conj(c);
    }
    out.f = fr;

    // checks along the interpolated loop
    double pos = 1e300, imr = 0;
    double arg_prev = 0, wind_acc = 0;
    for (int j = 0; j <= 2048; ++j) {
        double t = double(j) / 2048;
        cplx g = out.gamma(t);
        cplx v = what.eval(g) * out.dgamma(t);
        pos = std::min(pos, v.real());
        imr = std::max(imr, std::abs(v.imag()));
        double a = std::arg(W.eval(g));
        if (j > 0) {
            double d = a - arg_prev;
            while (d > PI) d -= TWO_PI;
            while (d < -PI) d += TWO_PI;
            wind_acc += d;
        }
        arg_prev = a;
    }
    out.positivity = pos;
    out.im_residual = imr;
    out.winding = int(std::lround(wind_acc / TWO_PI));
    if (pos <= 0) throw std::runtime_error("stokes_loop: positivity margin violated");
    if (out.winding != 0) throw std::runtime_error("stokes_loop: nonzero winding of W");
    return out;
}

// ---- symbolic transport recursion ----
namespace {

// polynomial in W, W', W'', ... with integer exponents (the W-power may be
// negative); key = exponent vector by derivative order
struct DPoly {
    std::map<std::vector<int>, cplx> terms;

    static DPoly monomial(std::vector<int> e, cplx c) {
        DPoly p;
        p.terms[std::move(e)] = c;
        return p;
    }
    DPoly operator*(const DPoly& o) const {
        DPoly r;
        for (const auto& [ea, ca] : terms)
            for (const auto& [eb, cb] : o.terms) {
                std::vector<int> e(std::max(ea.size(), eb.size()), 0);
                for (size_t i = 0; i < ea.size(); ++i) e[i] += ea[i];
                for (size_t i = 0; i < eb.size(); ++i) e[i] += eb[i];
                r.terms[e] += ca * cb;
            }
        r.prune();
        return r;
    }
    DPoly& operator+=(const DPoly& o) {
        for (const auto& [e, c] : o.terms) terms[e] += c;
        prune();
        return *this;
    }
    DPoly& operator*=(cplx c) {
        for (auto& [e, v] : terms) v *= c;
        return *this;
    }
    DPoly derivative() const {
        DPoly r;
        for (const auto& [e, c] : terms)
            for (size_t j = 0; j < e.size(); ++j) {
                if (e[j] == 0) continue;
                std::vector<int> en = e;
                en[j] -= 1;
                if (en.size() < j + 2) en.resize(j + 2, 0);
                en[j + 1] += 1;
                r.terms[en] += c * double(e[j]);
            }
        r.prune();
        return r;
    }
    void prune() {
        for (auto it = terms.begin(); it != terms.end();)
            it = (std::abs(it->second) < 1e-300) ? terms.erase(it) : std::next(it);
    }
    cplx eval(const std::vector<cplx>& wder) const {
        cplx s = 0;
        for (const auto& [e, c] : terms) {
            cplx t = c;
            for (size_t j = 0; j < e.size(); ++j) {
                if (e[j] == 0) continue;
                cplx base = wder[j];
                int p = e[j];
                if (p > 0)
                    for (int q = 0; q < p; ++q) t *= base;
                else
                    for (int q = 0; q < -p; ++q) t /= base;
            }
            s += t;
        }
        return s;
    }
    int max_order() const {
        int m = 0;
        for (const auto& [e, c] : terms) m = std::max(m, int(e.size()));
        return m;
    }
};

// r_0 = -W'/(2W); r_j = (i/(2W)) (r_{j-1}' + sum_{l+m=j-1} r_l r_m)
std::vector<DPoly> transport_r(int order) {
    std::vector<DPoly> r;
    r.push_back(DPoly::monomial({-1, 1}, cplx(-0.5, 0)));
    DPoly inv2w = DPoly::monomial({-1}, cplx(0.5, 0));
    for (int j = 1; j <= order; ++j) {
        DPoly acc = r[j - 1].derivative();
        for (int l = 0; l + (j - 1 - l) <= j - 1 && l <= j - 1; ++l) acc += r[l] * r[j - 1 - l];
        DPoly rj = inv2w * acc;
        rj *= cplx(0, 1);
        r.push_back(rj);
    }
    return r;
}

std::vector<cplx> w_derivatives(const TrigPoly1& W, cplx z, int upto) {
    std::vector<cplx> out(upto + 1);
    TrigPoly1 d = W;
    for (int j = 0; j <= upto; ++j) {
        out[j] = d.eval(z);
        d = d.derivative();
    }
    return out;
}

// composite Gauss-Legendre (10 nodes) over [0,1] with `panels` panels
template <class F>
cplx gauss_loop(F&& f, int panels) {
    static const double xg[5] = {0.14887433898163121, 0.43339539412924719, 0.67940956829902441,
                                 0.86506336668898451, 0.97390652851717172};
    static const double wg[5] = {0.29552422471475287, 0.26926671930999636, 0.21908636251598204,
                                 0.14945134915058059, 0.06667134430868814};
    cplx acc = 0;
    for (int p = 0; p < panels; ++p) {
        double a = double(p) / panels, b = double(p + 1) / panels;
        double mid = 0.5 * (a + b), half = 0.5 * (b - a);
        for (int i = 0; i < 5; ++i) {
            acc += wg[i] * half * (f(mid + half * xg[i]) + f(mid - half * xg[i]));
        }
    }
    return acc;
}

}  // namespace

std::vector<cplx> wkb_periods(const TrigPoly1& W, const StokesLoop& loop, int order) {
    if (order < 0) throw std::invalid_argument("wkb_periods: order must be >= 0");
    auto r = transport_r(order);
    TrigPoly1 what = W;
    what *= 1.0 / loop.w0;
    TrigPoly1 fder = loop.f.derivative();

    std::vector<cplx> c(order + 2, 0.0);
    // c_0 = oint W dz
    auto integ0 = [&](double t) {
        cplx g = loop.gamma(t);
        return W.eval(g) * loop.dgamma(t);
    };
    cplx c0a = gauss_loop(integ0, 16), c0b = gauss_loop(integ0, 32);
    if (std::abs(c0a - c0b) > 1e-9 * std::max(1.0, std::abs(c0b)))
        throw std::runtime_error("wkb_periods: quadrature did not converge");
    c[0] = c0b;
    for (int j = 0; j + 1 <= order + 1; ++j) {
        int upto = r[j].max_order();
        auto integ = [&](double t) {
            cplx g = loop.gamma(t);
            return r[j].eval(w_derivatives(W, g, upto)) * loop.dgamma(t);
        };
        cplx a = gauss_loop(integ, 16), b = gauss_loop(integ, 32);
        if (std::abs(a - b) > 1e-8 * std::max(1.0, std::abs(b)))
            throw std::runtime_error("wkb_periods: quadrature did not converge");
        c[j + 1] = -cplx(0, 1) * b;
    }
    return c;
}

std::vector<cplx> wkb_amplitude_derivatives(const TrigPoly1& W, cplx z, int order) {
    auto r = transport_r(order);
    std::vector<cplx> out;
    for (int j = 0; j <= order; ++j)
        out.push_back(r[j].eval(w_derivatives(W, z, r[j].max_order())));
    return out;
}

namespace {

cplx z_h_trace(const TrigPoly1& W, const StokesLoop& loop, cplx alpha, double h, double rtol) {
    cplx z0 = loop.gamma(0.0);
    TransitionMatrix tm = transition_matrix(W, z0, z0 + 1.0, alpha, h, nullptr, rtol);
    return 0.5 * tm.M.trace();
}

}  // namespace

QuantizationResult quantization_roots(const TrigPoly1& W, const StokesLoop& loop, cplx k,
                                      double h, int n_min, int n_max,
                                      const QuantizationOptions& opt) {
    // Re k is only defined modulo 2 pi h (shifting relabels n), so any k is
    // accepted; cos(k/h) is insensitive to the shift.
    QuantizationResult out;
    std::vector<cplx> c = wkb_periods(W, loop, 2);  // c_0..c_3
    cplx target = std::cos(k / h);
    auto F = [&](cplx a) { return target - z_h_trace(W, loop, a, h, opt.rtol); };

    for (int n = n_min; n <= n_max; ++n) {
        for (int sign : {+1, -1}) {
            cplx s = TWO_PI * n * h + double(sign) * k;
            if (std::abs(s) < 1e-12) continue;
            cplx series = s / c[0] - c[2] * h * h / s;
            cplx a = series, best_a = series;
            const double tscale = 1.0 + std::abs(target);
            const double noise = 1e-12 * tscale;  // integration floor of Z_h
            double best_f = std::abs(F(a));
            bool ok = best_f < 1e-10 * tscale;
            for (int it = 0; it < opt.newton_iters && !ok; ++it) {
                double delta = 1e-6 * std::max(1.0, std::abs(a));
                cplx fp = (F(a + delta) - F(a - delta)) / (2.0 * delta);
                // derivative indistinguishable from integration noise: a
                // (near-)multiple root resolved to the floor already
                if (std::abs(fp) * delta < 30.0 * noise) break;
                cplx fa = F(a);
                a -= fa / fp;
                double f_new = std::abs(F(a));
                if (f_new < best_f) {
                    best_f = f_new;
                    best_a = a;
                }
                if (f_new < 1e-11 * tscale) { ok = true; break; }
                if (f_new > 10.0 * best_f) break;  // noise ejection
            }
            a = best_a;
            ok = ok || best_f < 1e-9 * tscale;
            if (!ok || std::abs(a - series) > 0.45 * std::abs(TWO_PI * h / c[0])) {
                out.failed_seeds.push_back(series);
                continue;
            }
            QuantizationRoot root;
            root.n = n;
            root.sign = sign;
            root.alpha_exact = a;
            root.alpha_series = series;
            root.k = k;
            root.h = h;
            root.residual = best_f;
            root.series_gap = std::abs(a - series);
            root.im_band_ok =
                std::abs(k.imag()) <= std::abs(c[0]) * std::abs(a.imag()) + 10.0 * h;
            // double roots when k/h is a multiple of pi
            double kh = (k / h).real();
            bool kh_int_pi = std::abs(k.imag()) < 1e-12 &&
                             std::abs(kh / PI - std::lround(kh / PI)) < 1e-10;
            root.multiplicity = kh_int_pi ? 2 : 1;
            if (opt.multiplicities)
                root.multiplicity = toy_multiplicity(W, a, k, h, std::max(1e-4, h * h));
            // collapse the +- duplicate at double roots
            bool dup = false;
            for (const auto& rr : out.roots)
                if (std::abs(rr.alpha_exact - a) < 1e-9 * std::max(1.0, std::abs(a))) dup = true;
            if (!dup) out.roots.push_back(root);
        }
    }
    std::sort(out.roots.begin(), out.roots.end(),
              [](const QuantizationRoot& a, const QuantizationRoot& b) {
                  return std::abs(a.alpha_exact) < std::abs(b.alpha_exact);
              });
    return out;
}

int toy_multiplicity(const TrigPoly1& W, cplx alpha, cplx k, double h, double circle_radius,
                     int nodes) {
    auto detf = [&](cplx beta) {
        TransitionMatrix tm = transition_matrix(W, 0.0, 1.0, beta, h, nullptr, 1e-11);
        Eigen::Matrix2cd D = tm.M - std::exp(cplx(0, 1) * k / h) * Eigen::Matrix2cd::Identity();
        return D.determinant();
    };
    auto winding = [&](int nn) {
        double acc = 0, prev = 0;
        double min_abs = 1e300, max_abs = 0;
        for (int j = 0; j <= nn; ++j) {
            cplx g = detf(alpha + circle_radius * std::exp(cplx(0, TWO_PI * j / nn)));
            min_abs = std::min(min_abs, std::abs(g));
            max_abs = std::max(max_abs, std::abs(g));
            double a = std::arg(g);
            if (j > 0) {
                double d = a - prev;
                while (d > PI) d -= TWO_PI;
                while (d < -PI) d += TWO_PI;
                acc += d;
            }
            prev = a;
        }
        if (min_abs < 1e-12 * std::max(1.0, max_abs))
            throw std::runtime_error("toy_multiplicity: contour passes through a zero");
        return acc / TWO_PI;
    };
    double w1 = winding(nodes), w2 = winding(2 * nodes);
    if (std::abs(w1 - w2) > 0.1 || std::abs(w2 - std::lround(w2)) > 0.05)
        throw std::runtime_error("toy_multiplicity: winding quadrature failed");
    return int(std::lround(w2));
}

double direct_detector_sv(const TrigPoly1& W, cplx alpha, cplx zeta, int modes) {
    if (modes % 2 == 0) throw std::invalid_argument("direct_detector_sv: modes must be odd");
    const int half = (modes - 1) / 2;
    TrigPoly1 W2 = W * W;
    Eigen::MatrixXcd A = Eigen::MatrixXcd::Zero(modes, modes);
    for (int i = -half; i <= half; ++i) {
        cplx d = TWO_PI * double(i) + zeta;
        A(i + half, i + half) = d * d;
        for (const auto& [dn, c] : W2.terms) {
            int j = i - dn;
            if (j >= -half && j <= half) A(i + half, j + half) -= alpha * alpha * c;
        }
    }
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(A);
    return svd.singularValues()(modes - 1);
}

std::vector<Kernel2dEntry> kernel_set_2d(const TrigPoly1& W, cplx k, double alpha_min,
                                         double alpha_max, int mode_min, int mode_max,
                                         bool with_detector) {
    std::vector<Kernel2dEntry> out;
    cplx w0 = W.mean();
    if (std::abs(w0) < 1e-14) throw std::invalid_argument("kernel_set_2d: zero mean potential");
    int band = 0;
    for (const auto& [n, c] : W.terms) band = std::max(band, std::abs(n));

    for (int m = mode_min; m <= mode_max; ++m) {
        cplx zeta = cplx(0, TWO_PI * m) + k;
        for (int n = -int(alpha_max * std::abs(w0)); n <= int(alpha_max * std::abs(w0)) + 1; ++n) {
            for (int sign : {+1, -1}) {
                cplx a_naive = (TWO_PI * n + double(sign) * zeta) / w0;
                double mag = std::abs(a_naive);
                if (mag < alpha_min || mag > alpha_max) continue;
                double h = 1.0 / mag;
                cplx k_semi = zeta * h;
                // reduce Re k_semi/h = Re zeta into [-pi, pi] (integer shifts of n)
                QuantizationOptions qopt;
                cplx target = std::cos(zeta);
                auto F = [&](cplx b) {
                    TransitionMatrix tm = transition_matrix(W, 0.0, 1.0, b, h, nullptr, 1e-12);
                    return target - 0.5 * tm.M.trace();
                };
                cplx a = a_naive * h;  // semiclassical alpha near unit modulus
                bool ok = false;
                cplx fa = F(a);
                for (int it = 0; it < 40; ++it) {
                    double delta = 1e-6;
                    cplx fp = (F(a + delta) - F(a - delta)) / (2.0 * delta);
                    if (std::abs(fp) < 1e-300) break;
                    cplx step = fa / fp;
                    a -= step;
                    fa = F(a);
                    if (std::abs(step) < 1e-12 && std::abs(fa) < 1e-9) {
                        ok = true;
                        break;
                    }
                }
                if (!ok) continue;
                Kernel2dEntry e;
                e.alpha = a / h;
                e.mode = m;
                e.n = n;
                e.sign = sign;
                e.alpha_naive = a_naive;
                e.residual = std::abs(fa);
                if (std::abs(e.alpha - a_naive) > 0.45 * TWO_PI / std::abs(w0)) continue;
                bool dup = false;
                for (const auto& r : out)
                    if (r.mode == m &&
                        std::abs(r.alpha - e.alpha) < 1e-7 * std::max(1.0, std::abs(e.alpha)))
                        dup = true;
                if (dup) continue;
                if (with_detector) {
                    int modes = int(4 * std::max(band, 1) * mag) | 1;
                    modes = std::min(modes, 201);
                    e.detector_sv = direct_detector_sv(W, e.alpha, zeta, modes);
                }
                out.push_back(e);
            }
        }
    }
    std::sort(out.begin(), out.end(), [](const Kernel2dEntry& a, const Kernel2dEntry& b) {
        if (a.mode != b.mode) return a.mode < b.mode;
        return std::abs(a.alpha) < std::abs(b.alpha);
    });
    return out;
}

EnergyBoundReport energy_bound_check(const TrigPoly1& W, const StokesLoop& loop, cplx alpha,
                                     double h, unsigned seed) {
    std::mt19937 rng(seed);
    std::normal_distribution<double> g(0, 1);
    Eigen::Vector2cd u0(cplx(g(rng), g(rng)), cplx(g(rng), g(rng)));
    u0 /= u0.norm();

    // psi(t) = Im(alpha * Phi(gamma(t))); psi' = Im(alpha W(gamma) gamma')
    auto psi_prime = [&](double t) {
        return (alpha * W.eval(loop.gamma(t)) * loop.dgamma(t)).imag();
    };
    EnergyBoundReport rep;
    rep.psi_increment =
        (alpha * (W.eval_antiderivative(loop.gamma(0.0) + 1.0) -
                  W.eval_antiderivative(loop.gamma(0.0))))
            .imag();
    rep.psi_abs_integral = gauss_loop([&](double t) { return cplx(std::abs(psi_prime(t)), 0); },
                                      24)
                               .real();
    // propagate and measure the ratio at checkpoints
    const int NC = 32;
    double worst = 0;
    double abs_int = 0;
    Eigen::Vector2cd u = u0;
    for (int j = 1; j <= NC; ++j) {
        double t0 = double(j - 1) / NC, t1 = double(j) / NC;
        cplx a = loop.gamma(t0), b = loop.gamma(t1);
        TransitionMatrix tm = transition_matrix(W, a, b, alpha, h, nullptr, 1e-11);
        u = tm.M * u;
        abs_int += gauss_loop([&](double s) {
                       return cplx(std::abs(psi_prime(t0 + (t1 - t0) * s)) * (t1 - t0), 0);
                   },
                       4)
                       .real();
        double bound = std::exp(abs_int / h);
        worst = std::max(worst, u.norm() / (bound * u0.norm()));
    }
    rep.measured_c = worst;
    return rep;
}

double transfer_approx_error(const TrigPoly1& W, const StokesLoop& loop, cplx alpha, double h,
                             int order) {
    std::vector<cplx> c = wkb_periods(W, loop, order);
    cplx z0 = loop.gamma(0.0);
    TransitionMatrix tm = transition_matrix(W, z0, z0 + 1.0, alpha, h, nullptr, 1e-13);

    // B_N rows: (d_z Phi^{\pm}_N, -1) with d_z Phi^{\pm} = +-alpha W - i h sum h~^j r_j^{\pm},
    // r_j^- = (-1)^{j+1} r_j^+
    std::vector<cplx> r = wkb_amplitude_derivatives(W, z0, order);
    cplx w = W.eval(z0);
    cplx ht = h / alpha;
    cplx bp = 0, bm = 0, hj = 1;
    for (int j = 0; j <= order; ++j) {
        bp += hj * r[j];
        bm += hj * (((j + 1) % 2 == 0) ? r[j] : -r[j]);  // (-1)^{j+1} r_j
        hj *= ht;
    }
    Eigen::Matrix2cd B;
    B << alpha * w - cplx(0, 1) * h * bp, cplx(-1, 0), -alpha * w - cplx(0, 1) * h * bm,
        cplx(-1, 0);
    // c(h~) truncated at order+1
    cplx ch = 0;
    hj = 1;
    for (int j = 0; j <= order + 1 && j < int(c.size()); ++j) {
        ch += c[j] * hj;
        hj *= ht;
    }
    cplx ph = alpha * ch / h;
    Eigen::Matrix2cd S = Eigen::Matrix2cd::Zero();
    S(0, 0) = std::exp(-cplx(0, 1) * ph);
    S(1, 1) = std::exp(cplx(0, 1) * ph);
    Eigen::Matrix2cd approx = B.inverse() * S * B;
    return (tm.M - approx).norm();
}

}  // namespace flatband::toy
