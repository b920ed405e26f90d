#pragma once

#include <optional>
#include <string>

#include "flatband/torus_ops.hpp"

namespace flatband {

struct MagicAlpha {
    cplx alpha;
    int multiplicity = 1;
    double residual = 0;       // smallest singular value of P(alpha, k2) after refinement
    double match_residual = 0; // relative two-k eigenvalue match
    cplx k1, k2;
    bool truncation_warning = false;
};

struct TrichotomyClass {
    enum Kind { Generic, DiracPoint, FlatBand };
    Kind kind = Generic;
    double exponent = 0;         // fitted small-k exponent of E1
    double quadratic_coeff = 0;  // Generic: c with E1 ~ c |k|^2
    double slope1 = 0;           // Dirac: E1 ~ slope1 |k|
    double slope2 = 0;           // Dirac: E2 ~ slope2 |k|
    double wronskian_slope = 0;  // Dirac: (sqrt3/2) |Wr(u,v)| with unit L2 states
    int flat_multiplicity = 0;   // FlatBand
    std::string label() const {
        switch (kind) {
            case Generic: return "generic";
            case DiracPoint: return "dirac";
            default: return "flat";
        }
    }
};

struct FindMagicOptions {
    double match_tol = 1e-4;   // relative eigenvalue match between the two k's
    int dense_limit = 1500;    // modes; above this the Birman-Schwinger
                               // eigenvalues come from Arnoldi
    int krylov = 600;
    bool refine = true;
    bool multiplicities = true;
    double mult_threshold = 0;  // 0: default 1e-6 (4 pi/sqrt3)^2
    unsigned seed = 2026;
};

struct FindMagicResult {
    std::vector<MagicAlpha> alphas;  // the full symmetric set found in the window
    std::vector<cplx> rejected;      // candidates failing the two-k match
    double reliability_bound = 0;    // |alpha| scale where truncation degrades
};

// Locate the magic set: eigenvalues mu of T_{k1}, candidates alpha = mu^{-1/2}
// (both roots), kept iff T_{k2} matches within match_tol, then Newton-refined
// on the smallest singular value of P(alpha, k1).
FindMagicResult find_magic(const TrigPoly2& V, double radius, cplx k1, cplx k2, double alpha_max,
                           const FindMagicOptions& opt = {});

// Newton refinement of a single root of det P(., k) via the smallest singular
// triplet: alpha <- alpha - u^H P v / u^H (dP/dalpha) v.
cplx refine_alpha(const TrigPoly2& V, cplx alpha, cplx k, const ModeBasis& basis, int iters = 12);

// Number of singular values of D_S(alpha)+k below the threshold, consistent
// across three pseudo-random k; throws on inconsistency.
int flat_multiplicity(const TrigPoly2& V, cplx alpha, double radius, double threshold = 0,
                      unsigned seed = 99);

// Theorem-style classifier: flat band test first, then log-log fit of
// E1(alpha, k) over |k| in [1e-3, 1e-2]*|dual_scale| in 8 directions.
struct ClassifyOptions {
    double flat_tol = 0;  // 0: default 1e-5 * (4 pi/sqrt3)
    int directions = 8;
    unsigned seed = 4202;
};
TrichotomyClass classify_alpha(const TrigPoly2& V, cplx alpha, double radius,
                               const ClassifyOptions& opt = {});

// Real-axis scan for the set where P(alpha,0) has a kernel in the ell = -1
// rotation sector (double Dirac points), bisection-refined.
std::vector<double> locate_b_set(const TrigPoly2& V, double alpha_min, double alpha_max,
                                 double radius, double scan_step = 0.01);

struct SpacingRow {
    int k = 0;        // cumulative index (counting multiplicity)
    double alpha = 0;
    double gap = 0;   // alpha_k - alpha_{k - mult}; 0 for the first row
};
struct SpacingReport {
    std::vector<SpacingRow> rows;
    double asymptote = 0;  // average of the last three gaps
};
// Spacing table over the real positive part of the set (>= 4 values counting
// multiplicity required).
SpacingReport spacing_report(const std::vector<MagicAlpha>& alphas);

}  // namespace flatband
