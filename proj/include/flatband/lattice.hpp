#pragma once

#include <complex>
#include <cstdint>
#include <vector>

namespace flatband {

using cplx = std::complex<double>;

// Triangular lattice Lambda = omega*Z + Z with omega = exp(2*pi*i/3),
// dual lattice Lambda* = (4*pi*i/sqrt(3)) * Lambda, high symmetry point
// K = 4*pi/3 and stacking point z_S = i/sqrt(3) = (omega - omega^2)/3.
struct TriangularLattice {
    static cplx omega() { return {-0.5, std::sqrt(3.0) / 2.0}; }
    static cplx tau() { return {0.5, -std::sqrt(3.0) / 2.0}; }  // e^{-i pi/3}
    // shortest dual vector, also the scale of Lambda*
    static cplx dual_scale() { return {0.0, 4.0 * pi() / std::sqrt(3.0)}; }
    static double K() { return 4.0 * pi() / 3.0; }
    static cplx z_S() { return {0.0, 1.0 / std::sqrt(3.0)}; }
    static double cell_area() { return std::sqrt(3.0) / 2.0; }
    static double pi() { return 3.141592653589793238462643383279502884; }

    // lattice vector a*omega + b
    static cplx point(int a, int b) { return double(a) * omega() + double(b); }
};

// <z, w> = Re(z * conj(w));  exp(i<z,p>) with p in Lambda* is Lambda-periodic.
inline double pairing(cplx z, cplx p) { return (z * std::conj(p)).real(); }

// Dual lattice mode p = dual_scale * (m*omega + n).  The squared length in
// units of |dual_scale| is the integer quadratic form m^2 - m*n + n^2, which
// keeps truncation sets exactly closed under the 6-fold rotation.
struct DualIndex {
    int m = 0;
    int n = 0;

    cplx value() const { return TriangularLattice::dual_scale() * TriangularLattice::point(m, n); }
    std::int64_t norm2() const {
        auto mm = std::int64_t(m), nn = std::int64_t(n);
        return mm * mm - mm * nn + nn * nn;
    }
    DualIndex neg() const { return {-m, -n}; }
    bool operator==(const DualIndex& o) const { return m == o.m && n == o.n; }
};

// multiplication of m*omega+n by omega, omega^2(=conj), tau, conj(tau):
DualIndex mul_omega(DualIndex p);      // p -> omega p
DualIndex mul_omega_bar(DualIndex p);  // p -> conj(omega) p
DualIndex mul_tau(DualIndex p);        // p -> tau p
DualIndex mul_tau_bar(DualIndex p);    // p -> conj(tau) p

// All p in Lambda* with |p| <= radius, sorted by (|p|, arg p).  Closed under
// p -> -p and p -> omega p by construction (integer norm comparison).
std::vector<DualIndex> dual_points(double radius);

// Largest radius r <= radius such that {|p| <= r} equals the returned set
// extended by `shells` more distinct shells; used for convergence tests.
double shell_radius(int nonzero_shells);

// Permutation sigma with points[sigma[j]] = conj(omega) * points[j].
// Throws std::invalid_argument if the set is not rotation-closed.
std::vector<int> rotation_permutation(const std::vector<DualIndex>& points);

// Rotation sector label: eigenvalue tau^ell of C_1 u(z) = u(tau z).
struct SectorLabel {
    int ell = 0;  // 0..5
};

// Reduce z modulo Lambda to the representative closest to the origin.
cplx reduce_to_cell(cplx z);

}  // namespace flatband
