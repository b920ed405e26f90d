#include "flatband/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <stdexcept>

namespace flatband {

// omega*(m*omega + n) = m*omega^2 + n*omega = -m + (n-m)*omega   (omega^2 = -1-omega)
DualIndex mul_omega(DualIndex p) { return {p.n - p.m, -p.m}; }
// conj(omega)*(m*omega + n) = omega^2*(m*omega+n) = (m-n) - n*omega... derived below
// omega^2*(m*omega+n) = m*omega^3 + n*omega^2 = m + n*(-1-omega) = (m-n) - n*omega -> a=-n, b=m-n
DualIndex mul_omega_bar(DualIndex p) { return {-p.n, p.m - p.n}; }
// tau = -omega: tau*(m*omega+n) = (m-n) + m*omega
DualIndex mul_tau(DualIndex p) { return {p.m - p.n, p.m}; }
// conj(tau) = -omega^2: conj(tau)*(m*omega+n) = n*omega + (n-m)
DualIndex mul_tau_bar(DualIndex p) { return {p.n, p.n - p.m}; }

std::vector<DualIndex> dual_points(double radius) {
    if (!(radius > 0)) throw std::invalid_argument("dual_points: radius must be > 0");
    double s = radius / std::abs(TriangularLattice::dual_scale());
    auto S = std::int64_t(std::floor(s * s + 1e-9));
    int M = int(std::ceil(std::sqrt(double(S)) * 2.0 / std::sqrt(3.0))) + 1;
    std::vector<DualIndex> pts;
    for (int m = -M; m <= M; ++m)
        for (int n = -M; n <= M; ++n)
            if (DualIndex{m, n}.norm2() <= S) pts.push_back({m, n});
    std::sort(pts.begin(), pts.end(), [](const DualIndex& a, const DualIndex& b) {
        if (a.norm2() != b.norm2()) return a.norm2() < b.norm2();
        double ta = std::arg(a.value()), tb = std::arg(b.value());
        if (ta < 0) ta += 2 * TriangularLattice::pi();
        if (tb < 0) tb += 2 * TriangularLattice::pi();
        if (ta != tb) return ta < tb;
        return std::pair(a.m, a.n) < std::pair(b.m, b.n);
    });
    return pts;
}

double shell_radius(int nonzero_shells) {
    // distinct values of m^2 - m*n + n^2 > 0 in increasing order
    std::set<std::int64_t> vals;
    int M = 4 * (nonzero_shells + 2);
    for (int m = -M; m <= M; ++m)
        for (int n = -M; n <= M; ++n) {
            auto v = DualIndex{m, n}.norm2();
            if (v > 0) vals.insert(v);
        }
    auto it = vals.begin();
    std::advance(it, nonzero_shells - 1);
    return std::sqrt(double(*it)) * std::abs(TriangularLattice::dual_scale());
}

std::vector<int> rotation_permutation(const std::vector<DualIndex>& points) {
    std::map<std::pair<int, int>, int> idx;
    for (size_t i = 0; i < points.size(); ++i) idx[{points[i].m, points[i].n}] = int(i);
    std::vector<int> sigma(points.size());
    for (size_t i = 0; i < points.size(); ++i) {
        DualIndex r = mul_omega_bar(points[i]);
        auto it = idx.find({r.m, r.n});
        if (it == idx.end()) throw std::invalid_argument("rotation_permutation: set is not rotation-closed");
        sigma[i] = it->second;
    }
    return sigma;
}

cplx reduce_to_cell(cplx z) {
    // coordinates z = a*omega + b:  omega = (-1+i sqrt3)/2
    double y = z.imag() / (std::sqrt(3.0) / 2.0);
    double x = z.real() + 0.5 * y;
    double a0 = std::round(y), b0 = std::round(x);
    cplx best = z;
    double bd = std::abs(z);
    for (int da = -1; da <= 1; ++da)
        for (int db = -1; db <= 1; ++db) {
            cplx w = z - TriangularLattice::point(int(a0) + da, int(b0) + db);
            if (std::abs(w) < bd) {
                bd = std::abs(w);
                best = w;
            }
        }
    return best;
}

}  // namespace flatband
