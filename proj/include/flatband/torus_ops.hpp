#pragma once

#include <map>
#include <optional>

#include "flatband/linalg.hpp"
#include "flatband/trig_poly.hpp"

namespace flatband {

// Truncated Fourier mode set {p in Lambda* : |p| <= radius}, rotation closed.
class ModeBasis {
  public:
    explicit ModeBasis(double radius);

    const std::vector<DualIndex>& points() const { return points_; }
    double radius() const { return radius_; }
    int size() const { return int(points_.size()); }
    int find(int m, int n) const;  // -1 if absent
    const linalg::Vec& values() const { return values_; }

  private:
    std::vector<DualIndex> points_;
    std::map<std::pair<int, int>, int> index_;
    linalg::Vec values_;
    double radius_;
};

struct TruncatedOperator {
    linalg::Mat matrix;
    std::vector<DualIndex> index_map;
    int components = 1;  // 1 for P, 2 for D_S
    std::optional<SectorLabel> sector;
    double truncation_radius = 0;
    cplx alpha, k;
};

// P(alpha,k) = (2 D_zbar + k)^2 - alpha^2 V: diagonal (p+k)^2, coupling
// -alpha^2 a_{p-q} from mode q to mode p.  V must be Lambda periodic.
TruncatedOperator assemble_p(const TrigPoly2& V, cplx alpha, cplx k, double radius);
linalg::Mat assemble_p_matrix(const TrigPoly2& V, cplx alpha, cplx k, const ModeBasis& basis);
linalg::SpMat assemble_p_sparse(const TrigPoly2& V, cplx alpha, cplx k, const ModeBasis& basis);

// D_S(alpha) + k as a 2x2 block operator on (u1, u2).
TruncatedOperator assemble_ds(const TrigPoly2& V, cplx alpha, cplx k, double radius);
linalg::Mat assemble_ds_matrix(const TrigPoly2& V, cplx alpha, cplx k, const ModeBasis& basis);
linalg::SpMat assemble_ds_sparse(const TrigPoly2& V, cplx alpha, cplx k, const ModeBasis& basis);

// Birman-Schwinger operator T_k = (2 D_zbar + k)^{-2} V.
struct BirmanSchwingerOperator {
    linalg::Mat matrix;
    cplx k;
    double truncation_radius = 0;
};
BirmanSchwingerOperator assemble_birman(const TrigPoly2& V, cplx k, double radius);
// matrix-free application for iterative eigensolvers
std::function<void(const linalg::Vec&, linalg::Vec&)> birman_apply(const TrigPoly2& V, cplx k,
                                                                   const ModeBasis& basis);

// Smallest `count` singular values of D_S(alpha) + k, ascending; dense SVD
// for small truncations, shift-invert Lanczos above `dense_limit` rows.
std::vector<double> bands(const TrigPoly2& V, cplx alpha, cplx k, double radius, int count,
                          int dense_limit = 1400);
std::vector<double> bands(const TrigPoly2& V, cplx alpha, cplx k, const ModeBasis& basis,
                          int count, int dense_limit = 1400);

// Contour-integral multiplicity
//   m(alpha,k0) = (1/2 pi i) tr oint P(alpha,zeta)^{-1} d_zeta P(alpha,zeta) dzeta
// on |zeta - k0| = contour_radius, trapezoid rule with `nodes` and a
// Richardson check at 2*nodes.  Throws if the result is not close to an
// integer (|value - round| > 0.05).
struct KMultiplicity {
    int value = 0;
    double integrality = 0;  // |raw - round|
    double richardson = 0;   // |m_nodes - m_2nodes|
};
KMultiplicity k_multiplicity(const TrigPoly2& V, cplx alpha, cplx k0, double radius,
                             double contour_radius, int nodes = 64);

// Orthonormal basis of the rotation sector ell (eigenvalue tau^ell of
// C_1 u(z) = u(tau z)) as a sparse N x n_ell matrix of orbit combinations.
linalg::SpMat sector_basis(const ModeBasis& basis, int ell);

// pi_{ell+2} P(alpha,0) pi_ell in the orbit bases (dense, small).
linalg::Mat sector_block_p(const TrigPoly2& V, cplx alpha, const ModeBasis& basis, int ell);

// pi_{ell+1} (D_S(alpha)) pi_ell with the 2-component sector convention
// L^2_ell(C^2) = L^2_{ell+1} (+) L^2_ell.
linalg::Mat sector_block_ds(const TrigPoly2& V, cplx alpha, const ModeBasis& basis, int ell);

}  // namespace flatband
