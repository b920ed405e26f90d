#include "flatband/trig_poly.hpp"

#include <cctype>
#include <cmath>
#include <stdexcept>

#include "json.hpp"

namespace flatband {

using Key = TrigPoly2::Key;

cplx TrigPoly2::eval(cplx z) const {
    cplx s = 0;
    for (const auto& [k, a] : terms) s += a * std::exp(cplx(0, 1) * pairing(z, freq(k)));
    return s;
}

cplx TrigPoly2::eval_dzbar2(cplx z) const {
    cplx s = 0;
    for (const auto& [k, a] : terms) {
        cplx p = freq(k);
        s += p * a * std::exp(cplx(0, 1) * pairing(z, p));
    }
    return s;
}

TrigPoly2 TrigPoly2::dzbar2() const {
    TrigPoly2 r;
    for (const auto& [k, a] : terms) r.terms[k] = freq(k) * a;
    return r;
}

TrigPoly2 TrigPoly2::dz2() const {
    TrigPoly2 r;
    for (const auto& [k, a] : terms) r.terms[k] = std::conj(freq(k)) * a;
    return r;
}

TrigPoly2 TrigPoly2::conj_fn() const {
    TrigPoly2 r;
    for (const auto& [k, a] : terms) r.terms[{-k.first, -k.second}] = std::conj(a);
    return r;
}

TrigPoly2 TrigPoly2::reflect() const {
    TrigPoly2 r;
    for (const auto& [k, a] : terms) r.terms[{-k.first, -k.second}] = a;
    return r;
}

TrigPoly2 TrigPoly2::rotate_omega() const {
    // f(omega z) = sum a_p e^{i<z, conj(omega) p>}
    TrigPoly2 r;
    for (const auto& [k, a] : terms) {
        DualIndex d = mul_omega_bar({k.first, k.second});
        r.terms[{d.m, d.n}] = a;
    }
    return r;
}

TrigPoly2 TrigPoly2::conj_arg() const {
    // <conj z, p> = <z, conj p>;  conj(m*omega+n) = (m-n) - m*omega... conj(omega) = omega^2
    // conj(p(m,n)) = conj(dual_scale)*(m*conj(omega)+n) = -dual_scale*(m*omega^2+n)
    //             = dual_scale*(m + m*omega - n)   since -omega^2 = 1 + omega
    TrigPoly2 r;
    for (const auto& [k, a] : terms) r.terms[{k.first, k.first - k.second}] = a;
    return r;
}

TrigPoly2 TrigPoly2::translate(cplx gamma) const {
    TrigPoly2 r;
    for (const auto& [k, a] : terms)
        r.terms[k] = a * std::exp(cplx(0, 1) * pairing(gamma, freq(k)));
    return r;
}

TrigPoly2& TrigPoly2::operator+=(const TrigPoly2& o) {
    for (const auto& [k, a] : o.terms) terms[k] += a;
    return *this;
}

TrigPoly2& TrigPoly2::operator*=(cplx c) {
    for (auto& [k, a] : terms) a *= c;
    return *this;
}

TrigPoly2 operator*(const TrigPoly2& a, const TrigPoly2& b) {
    TrigPoly2 r;
    for (const auto& [ka, ca] : a.terms)
        for (const auto& [kb, cb] : b.terms)
            r.terms[{ka.first + kb.first, ka.second + kb.second}] += ca * cb;
    r.prune();
    return r;
}

TrigPoly2 operator-(const TrigPoly2& a, const TrigPoly2& b) {
    TrigPoly2 r = a;
    for (const auto& [k, c] : b.terms) r.terms[k] -= c;
    return r;
}

void TrigPoly2::prune(double tol) {
    double scale = std::max(max_coeff(), 1.0);
    for (auto it = terms.begin(); it != terms.end();)
        it = (std::abs(it->second) <= tol * scale) ? terms.erase(it) : std::next(it);
}

double TrigPoly2::max_coeff() const {
    double m = 0;
    for (const auto& [k, a] : terms) m = std::max(m, std::abs(a));
    return m;
}

double TrigPoly2::sup_bound() const {
    double s = 0;
    for (const auto& [k, a] : terms) s += std::abs(a);
    return s;
}

double TrigPoly2::bandwidth() const {
    double m = 0;
    for (const auto& [k, a] : terms) m = std::max(m, std::abs(freq(k)));
    return m;
}

bool TrigPoly2::lattice_periodic() const {
    for (const auto& [k, a] : terms)
        if (k.first % 3 != 0 || k.second % 3 != 0) return false;
    return true;
}

std::map<Key, cplx> TrigPoly2::dual_terms() const {
    if (!lattice_periodic())
        throw std::domain_error("TrigPoly2: frequencies are not supported on Lambda*");
    std::map<Key, cplx> out;
    for (const auto& [k, a] : terms) out[{k.first / 3, k.second / 3}] = a;
    return out;
}

// JSON records use Lambda* coordinates {m,n,re,im} when the function is
// lattice periodic, otherwise {"denom":3,"terms":[...]} with refined indices.
std::string TrigPoly2::to_json() const {
    nlohmann::json arr = nlohmann::json::array();
    if (lattice_periodic()) {
        for (const auto& [k, a] : dual_terms())
            arr.push_back({{"m", k.first}, {"n", k.second}, {"re", a.real()}, {"im", a.imag()}});
        return arr.dump(2);
    }
    for (const auto& [k, a] : terms)
        arr.push_back({{"m", k.first}, {"n", k.second}, {"re", a.real()}, {"im", a.imag()}});
    nlohmann::json j = {{"denom", 3}, {"terms", arr}};
    return j.dump(2);
}

TrigPoly2 TrigPoly2::from_json(const std::string& text) {
    auto j = nlohmann::json::parse(text);
    int scale = 3;
    nlohmann::json arr = j;
    if (j.is_object()) {
        if (j.at("denom").get<int>() != 3)
            throw std::invalid_argument("TrigPoly2::from_json: only denom 3 is supported");
        scale = 1;
        arr = j.at("terms");
    }
    TrigPoly2 f;
    for (const auto& t : arr)
        f.terms[{scale * t.at("m").get<int>(), scale * t.at("n").get<int>()}] +=
            cplx(t.at("re").get<double>(), t.value("im", 0.0));
    return f;
}

// ---- 1D ----

static const double TWO_PI = 2.0 * TriangularLattice::pi();

cplx TrigPoly1::eval(cplx z) const {
    cplx s = 0;
    for (const auto& [n, a] : terms) s += a * std::exp(cplx(0, 1) * (TWO_PI * double(n)) * z);
    return s;
}

TrigPoly1 TrigPoly1::derivative() const {
    TrigPoly1 r;
    for (const auto& [n, a] : terms)
        if (n != 0) r.terms[n] = a * cplx(0, TWO_PI * double(n));
    return r;
}

TrigPoly1 TrigPoly1::derivative(int order) const {
    TrigPoly1 r = *this;
    for (int i = 0; i < order; ++i) r = r.derivative();
    return r;
}

cplx TrigPoly1::mean() const {
    auto it = terms.find(0);
    return it == terms.end() ? cplx(0) : it->second;
}

TrigPoly1 TrigPoly1::antiderivative_periodic() const {
    TrigPoly1 r;
    for (const auto& [n, a] : terms)
        if (n != 0) r.terms[n] = a / cplx(0, TWO_PI * double(n));
    return r;
}

cplx TrigPoly1::eval_antiderivative(cplx z) const {
    return mean() * z + antiderivative_periodic().eval(z);
}

TrigPoly1& TrigPoly1::operator+=(const TrigPoly1& o) {
    for (const auto& [n, a] : o.terms) terms[n] += a;
    return *this;
}

TrigPoly1& TrigPoly1::operator*=(cplx c) {
    for (auto& [n, a] : terms) a *= c;
    return *this;
}

TrigPoly1 operator*(const TrigPoly1& a, const TrigPoly1& b) {
    TrigPoly1 r;
    for (const auto& [na, ca] : a.terms)
        for (const auto& [nb, cb] : b.terms) r.terms[na + nb] += ca * cb;
    for (auto it = r.terms.begin(); it != r.terms.end();)
        it = (std::abs(it->second) == 0.0) ? r.terms.erase(it) : std::next(it);
    return r;
}

double TrigPoly1::sup_bound_strip(double height) const {
    double s = 0;
    for (const auto& [n, a] : terms) s += std::abs(a) * std::exp(TWO_PI * std::abs(n) * height);
    return s;
}

std::string TrigPoly1::to_json() const {
    nlohmann::json j = nlohmann::json::array();
    for (const auto& [n, a] : terms) j.push_back({{"n", n}, {"re", a.real()}, {"im", a.imag()}});
    return j.dump(2);
}

TrigPoly1 TrigPoly1::from_json(const std::string& text) {
    auto j = nlohmann::json::parse(text);
    TrigPoly1 f;
    for (const auto& t : j)
        f.terms[t.at("n").get<int>()] += cplx(t.at("re").get<double>(), t.value("im", 0.0));
    return f;
}

// Spec grammar: sum of terms separated by '+'/'-'; each term is a complex
// amplitude ("1", "0.1", "(0.1+0.05i)", "0.3i") optionally followed by
// "cos" or "sin" and an optional integer harmonic ("cos" = cos(2 pi z),
// "cos2" = cos(4 pi z)).
TrigPoly1 TrigPoly1::parse_spec(const std::string& spec) {
    TrigPoly1 f;
    size_t i = 0;
    auto skip_ws = [&] { while (i < spec.size() && std::isspace((unsigned char)spec[i])) ++i; };
    auto parse_real = [&]() -> double {
        size_t end = 0;
        double v = std::stod(spec.substr(i), &end);
        i += end;
        return v;
    };
    auto parse_amplitude = [&]() -> cplx {
        skip_ws();
        if (i < spec.size() && spec[i] == '(') {
            ++i;
            double re = parse_real();
            skip_ws();
            cplx a(re, 0);
            if (i < spec.size() && (spec[i] == '+' || spec[i] == '-')) {
                double im = parse_real();
                skip_ws();
                if (i >= spec.size() || spec[i] != 'i') throw std::invalid_argument("expected 'i' in " + spec);
                ++i;
                a += cplx(0, im);
            }
            skip_ws();
            if (i >= spec.size() || spec[i] != ')') throw std::invalid_argument("expected ')' in " + spec);
            ++i;
            return a;
        }
        if (i < spec.size() && (std::isdigit((unsigned char)spec[i]) || spec[i] == '.')) {
            double v = parse_real();
            if (i < spec.size() && spec[i] == 'i') {
                ++i;
                return cplx(0, v);
            }
            return cplx(v, 0);
        }
        return cplx(1, 0);
    };

    double sign = 1.0;
    skip_ws();
    while (i < spec.size()) {
        if (spec[i] == '+') { sign = 1.0; ++i; skip_ws(); continue; }
        if (spec[i] == '-') { sign = -1.0; ++i; skip_ws(); continue; }
        cplx amp = sign * parse_amplitude();
        sign = 1.0;
        skip_ws();
        if (spec.compare(i, 3, "cos") == 0 || spec.compare(i, 3, "sin") == 0) {
            bool is_cos = spec[i] == 'c';
            i += 3;
            int harm = 1;
            if (i < spec.size() && std::isdigit((unsigned char)spec[i])) {
                size_t end = 0;
                harm = std::stoi(spec.substr(i), &end);
                i += end;
            }
            if (is_cos) {
                f.terms[harm] += amp * 0.5;
                f.terms[-harm] += amp * 0.5;
            } else {
                f.terms[harm] += amp * cplx(0, -0.5);
                f.terms[-harm] += amp * cplx(0, 0.5);
            }
        } else {
            f.terms[0] += amp;
        }
        skip_ws();
    }
    return f;
}

}  // namespace flatband
