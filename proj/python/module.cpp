// Python bindings for the main operations of the workbench.
#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "flatband/complex_wkb.hpp"
#include "flatband/magic.hpp"
#include "flatband/potentials.hpp"
#include "flatband/protected_state.hpp"
#include "flatband/special.hpp"
#include "flatband/wkb.hpp"

namespace py = pybind11;
using namespace flatband;

namespace {

TrigPoly2 make_potential(const std::string& name) {
    if (name == "henry") return scalar_V(henry_potential());
    if (name == "bm-scalar") return scalar_V(bm_potential());
    throw std::invalid_argument("potential must be 'henry' or 'bm-scalar'");
}

}  // namespace

PYBIND11_MODULE(_flatband, m) {
    m.doc() = "flat band workbench: scalar moire model and 1d complex-WKB toy";

    m.attr("dual_scale") = std::abs(TriangularLattice::dual_scale());
    m.attr("z_S") = TriangularLattice::z_S();

    py::class_<TrigPoly2>(m, "TrigPoly2")
        .def("__call__", &TrigPoly2::eval)
        .def("to_json", &TrigPoly2::to_json)
        .def_static("from_json", &TrigPoly2::from_json)
        .def("__len__", &TrigPoly2::size);

    m.def("potential", &make_potential, py::arg("name"),
          "scalar potential V for the named model");
    m.def("bm_potential", &bm_potential);
    m.def("henry_potential", &henry_potential);
    m.def("scalar_v", &scalar_V, py::arg("U"));
    m.def(
        "henry_w_and_phi",
        [] {
            auto [W, phi] = henry_W_and_phi();
            return py::make_tuple(W, phi);
        },
        "factorization V = W^2 and the real phase with 2 d_zbar phi = W");

    m.def(
        "bands",
        [](const TrigPoly2& V, cplx alpha, cplx k, double radius_shells, int count) {
            return bands(V, alpha, k, radius_shells * std::abs(TriangularLattice::dual_scale()),
                         count);
        },
        py::arg("V"), py::arg("alpha"), py::arg("k"), py::arg("radius_shells") = 5.2,
        py::arg("count") = 4, "smallest band values E_1..E_count at (alpha, k)");

    py::class_<MagicAlpha>(m, "MagicAlpha")
        .def_readonly("alpha", &MagicAlpha::alpha)
        .def_readonly("multiplicity", &MagicAlpha::multiplicity)
        .def_readonly("residual", &MagicAlpha::residual)
        .def_readonly("truncation_warning", &MagicAlpha::truncation_warning)
        .def("__repr__", [](const MagicAlpha& a) {
            return "MagicAlpha(" + std::to_string(a.alpha.real()) + "+" +
                   std::to_string(a.alpha.imag()) + "j, m=" + std::to_string(a.multiplicity) +
                   ")";
        });

    m.def(
        "find_magic",
        [](const TrigPoly2& V, double radius_shells, double alpha_max, bool multiplicities) {
            FindMagicOptions opt;
            opt.multiplicities = multiplicities;
            auto res = find_magic(V, radius_shells * std::abs(TriangularLattice::dual_scale()),
                                  cplx(0.31, 0.17), cplx(-0.23, 0.41), alpha_max, opt);
            return res.alphas;
        },
        py::arg("V"), py::arg("radius_shells") = 10.0, py::arg("alpha_max") = 1.0,
        py::arg("multiplicities") = true, "locate the magic coupling set");

    m.def(
        "classify_alpha",
        [](const TrigPoly2& V, cplx alpha, double radius_shells) {
            auto cls =
                classify_alpha(V, alpha, radius_shells * std::abs(TriangularLattice::dual_scale()));
            py::dict d;
            d["kind"] = cls.label();
            d["exponent"] = cls.exponent;
            d["flat_multiplicity"] = cls.flat_multiplicity;
            d["slope"] = cls.slope1;
            d["wronskian_slope"] = cls.wronskian_slope;
            return d;
        },
        py::arg("V"), py::arg("alpha"), py::arg("radius_shells") = 10.0);

    py::class_<ProtectedState>(m, "ProtectedState")
        .def("__call__", &ProtectedState::eval)
        .def_readonly("alpha", &ProtectedState::alpha)
        .def_readonly("residual", &ProtectedState::residual)
        .def("pair_norm_at", &ProtectedState::pair_norm_at)
        .def("edge_zero_count", [](const ProtectedState& st) { return edge_zero_count(st); })
        .def("zeros", [](const ProtectedState& st) {
            py::list out;
            for (const auto& zr : zero_census(st)) {
                py::dict d;
                d["location"] = zr.location;
                d["multiplicity"] = zr.multiplicity;
                out.append(d);
            }
            return out;
        });

    m.def(
        "protected_state",
        [](const TrigPoly2& V, cplx alpha, double radius_shells) {
            return protected_state(V, alpha,
                                   radius_shells * std::abs(TriangularLattice::dual_scale()));
        },
        py::arg("V"), py::arg("alpha"), py::arg("radius_shells") = 10.0);

    m.def("airy", [](cplx xi) { return py::make_tuple(airy(xi).ai, airy(xi).aip); },
          "Ai(xi) and Ai'(xi)");
    m.def(
        "hankel16",
        [](cplx w, int sheet) {
            auto p = hankel16(w, sheet);
            return py::make_tuple(p.h1, p.h2);
        },
        py::arg("w"), py::arg("sheet") = 0, "Hankel functions of order 1/6");
    m.def("edge_ansatz", &edge_ansatz, py::arg("z"), py::arg("alpha"));
    m.def("center_ansatz", &center_ansatz, py::arg("z"), py::arg("alpha"));
    m.def("quantization_spacing", [] { return quantization_heuristic().delta_alpha; });

    // 1d toy model
    py::class_<TrigPoly1>(m, "TrigPoly1")
        .def("__call__", &TrigPoly1::eval)
        .def_static("parse", &TrigPoly1::parse_spec);

    py::class_<toy::StokesLoop>(m, "StokesLoop")
        .def_readonly("closure", &toy::StokesLoop::closure)
        .def_readonly("positivity", &toy::StokesLoop::positivity)
        .def_readonly("winding", &toy::StokesLoop::winding)
        .def("gamma", &toy::StokesLoop::gamma);
    m.def("stokes_loop", &toy::stokes_loop, py::arg("W"));

    m.def(
        "transition_matrix",
        [](const TrigPoly1& W, cplx z0, cplx z1, cplx alpha, double h) {
            auto tm = toy::transition_matrix(W, z0, z1, alpha, h);
            return py::make_tuple(py::make_tuple(tm.M(0, 0), tm.M(0, 1)),
                                  py::make_tuple(tm.M(1, 0), tm.M(1, 1)));
        },
        py::arg("W"), py::arg("z0"), py::arg("z1"), py::arg("alpha"), py::arg("h"));

    m.def(
        "wkb_periods",
        [](const TrigPoly1& W, int order) {
            auto loop = toy::stokes_loop(W);
            return toy::wkb_periods(W, loop, order);
        },
        py::arg("W"), py::arg("order") = 2);

    m.def(
        "quantization_roots",
        [](const TrigPoly1& W, cplx k, double h, int n0, int n1) {
            auto loop = toy::stokes_loop(W);
            auto res = toy::quantization_roots(W, loop, k, h, n0, n1);
            py::list out;
            for (const auto& r : res.roots) {
                py::dict d;
                d["n"] = r.n;
                d["sign"] = r.sign;
                d["alpha"] = r.alpha_exact;
                d["alpha_series"] = r.alpha_series;
                d["residual"] = r.residual;
                d["series_gap"] = r.series_gap;
                d["multiplicity"] = r.multiplicity;
                out.append(d);
            }
            return out;
        },
        py::arg("W"), py::arg("k"), py::arg("h"), py::arg("n0"), py::arg("n1"));

    m.def("toy_multiplicity", &toy::toy_multiplicity, py::arg("W"), py::arg("alpha"),
          py::arg("k"), py::arg("h"), py::arg("circle_radius") = 1e-3, py::arg("nodes") = 64);

#ifdef VERSION_INFO
    m.attr("__version__") = VERSION_INFO;
#else
    m.attr("__version__") = "0.1.0";
#endif
}
