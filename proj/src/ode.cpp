#include "flatband/ode.hpp"

#include <cmath>
#include <stdexcept>

namespace flatband {

namespace {

// Dormand-Prince 5(4) tableau
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                 b6 = 11.0 / 84;
constexpr double e1 = 35.0 / 384 - 5179.0 / 57600, e3 = 500.0 / 1113 - 7571.0 / 16695,
                 e4 = 125.0 / 192 - 393.0 / 640, e5 = -2187.0 / 6784 + 92097.0 / 339200,
                 e6 = 11.0 / 84 - 187.0 / 2100, e7 = -1.0 / 40;

}  // namespace

Eigen::VectorXcd integrate_ode(const OdeRhs& rhs, double t0, double t1, Eigen::VectorXcd y,
                               const OdeOptions& opt, OdeStats* stats) {
    const double dir = (t1 >= t0) ? 1.0 : -1.0;
    double t = t0;
    if (t1 == t0) return y;
    double h = std::min(opt.h_init, std::abs(t1 - t0)) * dir;
    const int n = int(y.size());
    Eigen::VectorXcd k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n), ytmp(n), y5(n);
    rhs(t, y, k1);
    long steps = 0, rejected = 0;
    while (dir * (t1 - t) > 0) {
        if (dir * (t + h - t1) > 0) h = t1 - t;
        ytmp = y + h * a21 * k1;
        rhs(t + c2 * h, ytmp, k2);
        ytmp = y + h * (a31 * k1 + a32 * k2);
        rhs(t + c3 * h, ytmp, k3);
        ytmp = y + h * (a41 * k1 + a42 * k2 + a43 * k3);
        rhs(t + c4 * h, ytmp, k4);
        ytmp = y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4);
        rhs(t + c5 * h, ytmp, k5);
        ytmp = y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5);
        rhs(t + h, ytmp, k6);
        y5 = y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
        rhs(t + h, y5, k7);
        double err = 0;
        for (int i = 0; i < n; ++i) {
            cplx e = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] +
                          e7 * k7[i]);
            double sc = opt.atol + opt.rtol * std::max(std::abs(y[i]), std::abs(y5[i]));
            err = std::max(err, std::abs(e) / sc);
        }
        if (err <= 1.0) {
            t += h;
            y.swap(y5);
            k1.swap(k7);  // first-same-as-last
            ++steps;
        } else {
            ++rejected;
        }
        double fac = 0.9 * std::pow(std::max(err, 1e-10), -0.2);
        fac = std::min(5.0, std::max(0.2, fac));
        h *= fac;
        if (std::abs(h) < opt.h_min) throw std::runtime_error("integrate_ode: step size collapsed");
        if (steps + rejected > opt.max_steps)
            throw std::runtime_error("integrate_ode: step budget exhausted");
    }
    if (stats) {
        stats->steps = steps;
        stats->rejected = rejected;
    }
    return y;
}

std::vector<Eigen::VectorXcd> integrate_ode_checkpoints(const OdeRhs& rhs, double t0,
                                                        const std::vector<double>& ts,
                                                        Eigen::VectorXcd y0,
                                                        const OdeOptions& opt) {
    std::vector<Eigen::VectorXcd> out;
    double t = t0;
    for (double tc : ts) {
        y0 = integrate_ode(rhs, t, tc, std::move(y0), opt);
        t = tc;
        out.push_back(y0);
    }
    return out;
}

}  // namespace flatband
