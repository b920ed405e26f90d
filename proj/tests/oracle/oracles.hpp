#pragma once

#include <string>

#include "flatband/torus_ops.hpp"
#include "flatband/trig_poly.hpp"

// Independent brute-force reference implementations used to validate the
// main build.  Each oracle uses a different discretization principle than
// the operation it checks (grid collocation vs index convolution, Fourier
// truncation vs ODE propagation).
namespace flatband::oracle {

// Fourier collocation of P(alpha,k) on an n_g x n_g periodic grid: V is
// sampled pointwise, transformed by DFT and applied as a circular
// convolution over the box modes.  Returns the `count` smallest singular
// values, ascending.  Requires n_g >= 4x the potential bandwidth (in box
// index units); throws otherwise.
std::vector<double> grid_assembly_singulars(const TrigPoly2& V, cplx alpha, cplx k, int grid_n,
                                            int count);

// Smallest singular value of the 1D operator (D_x + zeta)^2 - alpha^2 W(x)^2
// truncated to `modes` Fourier modes e^{2 pi i n x}, |n| <= (modes-1)/2.
double direct_1d_kernel_detector(const TrigPoly1& W, cplx alpha, cplx zeta, int modes);

struct OracleRecord {
    std::string name;
    std::string inputs;
    double oracle_value = 0;
    double main_value = 0;
    double discrepancy = 0;
    double tolerance = 0;
    bool pass = false;
};

}  // namespace flatband::oracle
