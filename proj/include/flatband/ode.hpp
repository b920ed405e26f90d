#pragma once

#include <Eigen/Dense>
#include <functional>

#include "flatband/lattice.hpp"

namespace flatband {

// Adaptive Dormand-Prince 5(4) for complex-valued systems y' = f(t, y) on a
// real parameter interval; used for holomorphic ODEs along parametrized paths.
struct OdeOptions {
    double rtol = 1e-12;
    double atol = 1e-14;
    double h_init = 1e-3;
    double h_min = 1e-13;
    long max_steps = 2000000;
};

struct OdeStats {
    long steps = 0;
    long rejected = 0;
};

using OdeRhs = std::function<void(double, const Eigen::VectorXcd&, Eigen::VectorXcd&)>;

// Integrates from t0 to t1 (t1 > t0 or t1 < t0), returns y(t1).
// Throws std::runtime_error if the step size collapses below h_min.
Eigen::VectorXcd integrate_ode(const OdeRhs& rhs, double t0, double t1, Eigen::VectorXcd y0,
                               const OdeOptions& opt = {}, OdeStats* stats = nullptr);

// Same, but reports the solution at the given sorted checkpoints.
std::vector<Eigen::VectorXcd> integrate_ode_checkpoints(const OdeRhs& rhs, double t0,
                                                        const std::vector<double>& ts,
                                                        Eigen::VectorXcd y0,
                                                        const OdeOptions& opt = {});

}  // namespace flatband
