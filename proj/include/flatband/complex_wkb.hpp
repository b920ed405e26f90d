#pragma once

#include <Eigen/Dense>
#include <optional>

#include "flatband/trig_poly.hpp"

// Complex WKB for the one dimensional family (h D_z)^2 - alpha^2 W(z)^2 with
// W an entire 1-periodic trigonometric polynomial: holomorphic transition
// matrices, Stokes loops, WKB period coefficients, the quantization condition
// and its roots, and contour-integral multiplicities.
namespace flatband::toy {

using flatband::cplx;
using flatband::TrigPoly1;

// Piecewise-linear path between complex nodes.
struct PathCurve {
    std::vector<cplx> nodes;

    static PathCurve line(cplx a, cplx b) { return {{a, b}}; }
    double length() const;
    // throws std::invalid_argument on degenerate or self-intersecting paths
    void validate() const;
};

struct TransitionMatrix {
    Eigen::Matrix2cd M;  // propagates (u, h D_z u)
    cplx z0, z1;
    cplx alpha;
    double h = 0;
    double est_error = 0;  // from a coarse/fine integration pair
};

// Propagates the two basis Cauchy data along the path (default: straight
// segment z0 -> z1) by adaptive integration of u'' = -(alpha/h)^2 W^2 u.
TransitionMatrix transition_matrix(const TrigPoly1& W, cplx z0, cplx z1, cplx alpha, double h,
                                   const PathCurve* path = nullptr, double rtol = 1e-13);

// Stokes loop gamma(t) = t + i f(t) with W(gamma) gamma' > 0 after phase
// normalization by W_0 = mean(W); f solves f' = -Im Whac/Re What and is stored
// as a trigonometric interpolant.
struct StokesLoop {
    TrigPoly1 f;          // real 1-periodic lift, gamma(t) = t + i f(t)
    cplx w0;              // mean of W
    double closure = 0;   // |f(1) - f(0)| from the ODE solve
    double positivity = 0;  // min_t Re(What(gamma) gamma')
    double im_residual = 0; // max_t |Im(What(gamma) gamma')|
    int winding = 0;        // winding number of W along gamma

    cplx gamma(double t) const { return cplx(t, 0) + cplx(0, 1) * f.eval(t); }
    cplx dgamma(double t) const { return 1.0 + cplx(0, 1) * f.derivative().eval(t); }
};

// Throws std::runtime_error (with the failed check named) if the closure ODE
// blows up, Re What <= 0 is reached, the loop fails to close, or the winding
// is nonzero.
StokesLoop stokes_loop(const TrigPoly1& W);

// WKB period coefficients c_0 .. c_{N+1} of the periodicity factor
// Phi_N(z+1) - Phi_N(z) = alpha c(h/alpha), via the exact transport recursion
//   r_0 = -W'/(2W),  r_j = (i/(2W)) (r_{j-1}' + sum_{l+m=j-1} r_l r_m)
// evaluated symbolically in (W, W', ...) and integrated over the loop.
std::vector<cplx> wkb_periods(const TrigPoly1& W, const StokesLoop& loop, int order);

// Evaluate r_j^{+} at a point (for the transfer-matrix approximation).
std::vector<cplx> wkb_amplitude_derivatives(const TrigPoly1& W, cplx z, int order);

struct QuantizationRoot {
    int n = 0;
    int sign = +1;
    cplx alpha_exact;
    cplx alpha_series;
    cplx k;
    double h = 0;
    double residual = 0;    // |cos(k/h) - Z_h(alpha)|
    double series_gap = 0;  // |alpha_exact - alpha_series|
    int multiplicity = 1;
    bool im_band_ok = true;  // |Im k| <= c0 |Im alpha| + C h
};

struct QuantizationResult {
    std::vector<QuantizationRoot> roots;
    std::vector<cplx> failed_seeds;
};

struct QuantizationOptions {
    double rtol = 1e-12;
    int newton_iters = 40;
    bool multiplicities = false;  // winding-based multiplicity per root
};

// Roots of cos(k/h) = Z_h(alpha) = tr M_{gamma(0)+1 <- gamma(0)}/2 for
// n in [n_min, n_max] and both signs, seeded by the series expansion.
QuantizationResult quantization_roots(const TrigPoly1& W, const StokesLoop& loop, cplx k,
                                      double h, int n_min, int n_max,
                                      const QuantizationOptions& opt = {});

// Multiplicity of alpha as a zero of det(M(beta) - e^{ik/h}) by the winding
// number over a circle; throws if the determinant nearly vanishes on the
// contour.
int toy_multiplicity(const TrigPoly1& W, cplx alpha, cplx k, double h, double circle_radius,
                     int nodes = 64);

// Smallest singular value of (D_x + zeta)^2 - alpha^2 W(x)^2 truncated to an
// odd number of Fourier modes (in-module detector used by kernel_set_2d).
double direct_detector_sv(const TrigPoly1& W, cplx alpha, cplx zeta, int modes);

// 2D toy model kernel set: V(x,y) = W(x)^2 on the square torus; Fourier mode
// m in y gives zeta = 2 pi i m + k, rescaled to a semiclassical run with
// h = 1/|A_naive| per candidate.  Each root is cross-checked against the
// direct 1D Fourier-truncation detector.
struct Kernel2dEntry {
    cplx alpha;  // unscaled coupling
    int mode = 0;
    int n = 0;
    int sign = +1;
    cplx alpha_naive;     // W0^{-1}(2 pi n +- zeta)
    double residual = 0;  // quantization residual of the semiclassical run
    double detector_sv = 0;  // smallest singular value of the truncated 1D operator
};
std::vector<Kernel2dEntry> kernel_set_2d(const TrigPoly1& W, cplx k, double alpha_min,
                                         double alpha_max, int mode_min, int mode_max,
                                         bool with_detector = true);

// Growth bound diagnostic along a path: propagates a random Cauchy datum and
// reports the measured constant in |u(t)| <= C exp(h^{-1} int |psi'|) |u(0)|.
struct EnergyBoundReport {
    double measured_c = 0;       // max_t of the measured ratio
    double psi_increment = 0;    // psi(1) - psi(0)
    double psi_abs_integral = 0; // int_0^1 |psi'| dt
};
EnergyBoundReport energy_bound_check(const TrigPoly1& W, const StokesLoop& loop, cplx alpha,
                                     double h, unsigned seed = 7);

// || M - B_N^{-1} S_N B_N || for the WKB transfer-matrix approximation along
// the loop (Lemma-style h^{N+1} accuracy check).
double transfer_approx_error(const TrigPoly1& W, const StokesLoop& loop, cplx alpha, double h,
                             int order);

}  // namespace flatband::toy
