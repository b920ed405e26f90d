#pragma once

#include "flatband/torus_ops.hpp"

namespace flatband {

// Kernel element of P(alpha,0) restricted to a rotation sector, stored by its
// Fourier coefficients.  For ell = 0 this is the symmetry protected state;
// coefficients are normalized to unit l2 norm and the phase is fixed so that
// the value at z_ref = 0.17 is real and positive.
struct ProtectedState {
    cplx alpha;
    int sector = 0;
    std::vector<DualIndex> modes;
    linalg::Vec coeffs;
    double residual = 0;        // ||P u||_2 of the coefficient vector
    double next_block_sv = 0;   // smallest non-structural singular value of the block
    bool degenerate_warning = false;

    cplx eval(cplx z) const;
    cplx eval_dzbar2(cplx z) const;       // (2 D_zbar u)(z)
    cplx eval_dz(cplx z, int order) const;  // d^order/dz^order u
    // components of the 2-vector (u, alpha^{-1} 2 D_zbar u) and its norm
    cplx pair_component(cplx z, int comp) const;
    double pair_norm_at(cplx z) const;
    // squared pair norm with gradient and Hessian in (x,y), for zero refinement
    void value_grad_hess(cplx z, double& val, Eigen::Vector2d& grad,
                         Eigen::Matrix2d& hess) const;
    double sup_on_cell(int samples = 48) const;
    // L2(dm) norm of the 2-vector (alpha^{-1} 2 D_zbar u, -u)
    double two_vector_norm() const;
};

ProtectedState protected_state(const TrigPoly2& V, cplx alpha, double radius);
ProtectedState sector_kernel_state(const TrigPoly2& V, cplx alpha, const ModeBasis& basis,
                                   int ell);

struct ZeroRecord {
    cplx location;      // fundamental domain representative
    int multiplicity;   // radial decay order of u
    double value;       // |u| at the refined location
};

// Zeros of the state on the torus: coarse grid minima of |u|, Newton
// refinement on |u|^2, multiplicity from the log|u| slope on shrinking
// circles.  Throws if a candidate below threshold fails to resolve.
std::vector<ZeroRecord> zero_census(const ProtectedState& state, int grid = 96);

// Sign changes of the (real-valued) state along the hexagon edge
// z(t) = i t/sqrt(3), t in [1,2].
int edge_zero_count(const ProtectedState& state, int samples = 1600);
// Largest |Im u| along the edge relative to max |u| (diagnostic).
double edge_imag_ratio(const ProtectedState& state, int samples = 200);

struct WronskianResult {
    cplx value;
    double constancy;  // std/|mean| over the sample points
};

// Wronskian u1 v2 - u2 v1 of the 2-vector states (alpha^{-1} 2 D_zbar u, -u)
// normalized in L2 of the fundamental cell; constant for kernel elements.
WronskianResult wronskian(const ProtectedState& u, const ProtectedState& v, int samples = 20);

}  // namespace flatband
