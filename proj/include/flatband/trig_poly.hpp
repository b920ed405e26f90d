#pragma once

#include <map>
#include <string>
#include <utility>

#include "flatband/lattice.hpp"

namespace flatband {

// Finite Fourier series with frequencies on the refined lattice (1/3)Lambda*,
//   f(z) = sum_{(m,n)} a_{mn} exp(i <z, p(m,n)>),   p(m,n) = (dual_scale/3)*(m*omega+n).
// The refinement accommodates the quasi-periodic potentials built from the
// high-symmetry point K = dual_scale*(-2*omega-1)/3; Lambda-periodic functions
// have all keys divisible by 3.  Stored exactly as a frequency map; products
// are convolutions on the integer indices, derivatives act term-wise
// (2 D_zbar is multiplication by p).
class TrigPoly2 {
  public:
    using Key = std::pair<int, int>;
    std::map<Key, cplx> terms;

    static cplx freq(const Key& k) {
        return TriangularLattice::dual_scale() / 3.0 * TriangularLattice::point(k.first, k.second);
    }
    static Key dual_key(int m, int n) { return {3 * m, 3 * n}; }  // p in Lambda*
    bool lattice_periodic() const;  // all keys divisible by 3
    // terms re-indexed by Lambda* coordinates; throws if not lattice_periodic
    std::map<Key, cplx> dual_terms() const;

    cplx eval(cplx z) const;
    cplx eval_dzbar2(cplx z) const;  // (2 D_zbar f)(z)

    TrigPoly2 dzbar2() const;  // 2 D_zbar f : a_p -> p a_p
    TrigPoly2 dz2() const;     // 2 D_z f    : a_p -> conj(p) a_p
    TrigPoly2 conj_fn() const;       // z -> conj(f(z))
    TrigPoly2 reflect() const;       // z -> f(-z)
    TrigPoly2 rotate_omega() const;  // z -> f(omega z)
    TrigPoly2 conj_arg() const;      // z -> f(conj z)
    TrigPoly2 translate(cplx gamma) const;  // z -> f(z + gamma)

    TrigPoly2& operator+=(const TrigPoly2& o);
    TrigPoly2& operator*=(cplx c);
    friend TrigPoly2 operator*(const TrigPoly2& a, const TrigPoly2& b);  // pointwise product
    friend TrigPoly2 operator+(TrigPoly2 a, const TrigPoly2& b) { return a += b; }
    friend TrigPoly2 operator-(const TrigPoly2& a, const TrigPoly2& b);

    void prune(double tol = 1e-14);
    double max_coeff() const;
    double sup_bound() const;  // sum |a_p| >= sup |f|
    double bandwidth() const;  // max |p| over support
    // max over (j) random z of |f - g| given an evaluator
    size_t size() const { return terms.size(); }

    std::string to_json() const;           // [{m,n,re,im},...]
    static TrigPoly2 from_json(const std::string& text);
};

// 1D 1-periodic series f(z) = sum_n a_n exp(2 pi i n z), entire in z.
class TrigPoly1 {
  public:
    std::map<int, cplx> terms;

    cplx eval(cplx z) const;
    TrigPoly1 derivative() const;  // d/dz
    TrigPoly1 derivative(int order) const;
    cplx mean() const;  // a_0
    // antiderivative: Phi(z) = a_0 z + sum_{n!=0} a_n e^{2 pi i n z}/(2 pi i n);
    // returns the periodic part, the linear coefficient is mean().
    TrigPoly1 antiderivative_periodic() const;
    cplx eval_antiderivative(cplx z) const;  // Phi(z) with Phi(0)=periodic part at 0 + 0

    TrigPoly1& operator+=(const TrigPoly1& o);
    TrigPoly1& operator*=(cplx c);
    friend TrigPoly1 operator*(const TrigPoly1& a, const TrigPoly1& b);

    double sup_bound_strip(double height) const;  // sum |a_n| e^{2 pi |n| height}
    size_t size() const { return terms.size(); }

    std::string to_json() const;
    static TrigPoly1 from_json(const std::string& text);
    // tiny grammar for CLI specs like "1+0.1cos", "1+(0.1+0.05i)cos2+0.3sin"
    static TrigPoly1 parse_spec(const std::string& spec);
};

}  // namespace flatband
