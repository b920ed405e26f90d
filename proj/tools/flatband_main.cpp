// Command line front end: parameter sweeps for the flat-band workbench with
// CSV/JSON artifacts.  Subcommands: magic, bands, state, wkb, toy, check.
#include <atomic>
#include <complex>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "acceptance_criteria.hpp"
#include "flatband/complex_wkb.hpp"
#include "flatband/magic.hpp"
#include "flatband/potentials.hpp"
#include "flatband/protected_state.hpp"
#include "flatband/store.hpp"
#include "flatband/wkb.hpp"
#include "json.hpp"

using namespace flatband;
using nlohmann::json;

namespace {

const double QLEN = std::abs(TriangularLattice::dual_scale());

struct GlobalConfig {
    std::string output = "out";
    std::string config_file;
    std::string potential = "henry";
    double radius_shells = 5.2;  // truncation radius in units of |dual_scale|
    double alpha_max = 2.4;
    int threads = 0;
    json as_json(const std::string& cmd) const {
        json j;
        j["command"] = cmd;
        j["output"] = output;
        j["potential"] = potential;
        j["radius_shells"] = radius_shells;
        j["alpha_max"] = alpha_max;
        return j;
    }
};

TrigPoly2 load_potential(const std::string& sel) {
    if (sel == "henry") return scalar_V(henry_potential());
    if (sel == "bm-scalar") return scalar_V(bm_potential());
    if (sel.rfind("custom:", 0) == 0) {
        std::ifstream in(sel.substr(7));
        if (!in) throw std::invalid_argument("cannot open potential file " + sel.substr(7));
        std::stringstream ss;
        ss << in.rdbuf();
        return TrigPoly2::from_json(ss.str());
    }
    throw std::invalid_argument("unknown potential selector: " + sel);
}

int pool_size(int flag_value) {
    if (const char* env = std::getenv("FLATBAND_THREADS")) {
        int v = std::atoi(env);
        if (v > 0) return v;
    }
    if (flag_value > 0) return flag_value;
    unsigned hw = std::thread::hardware_concurrency();
    return hw ? int(hw) : 1;
}

std::string cls_string(const TrichotomyClass& c) {
    if (c.kind == TrichotomyClass::FlatBand)
        return "flat(" + std::to_string(c.flat_multiplicity) + ")";
    if (c.kind == TrichotomyClass::DiracPoint) return "dirac";
    return "generic";
}

int cmd_magic(const GlobalConfig& g) {
    ResultStore store(g.output);
    TrigPoly2 V = load_potential(g.potential);
    double radius = g.radius_shells * QLEN;
    auto res = find_magic(V, radius, cplx(0.31, 0.17), cplx(-0.23, 0.41), g.alpha_max);
    std::vector<std::vector<CsvCell>> rows, scatter;
    for (const auto& a : res.alphas) {
        std::string cls = "flat(" + std::to_string(a.multiplicity) + ")";
        try {
            cls = cls_string(classify_alpha(V, a.alpha, radius));
        } catch (const std::exception&) {
            // keep the multiplicity label when the small-k fit is ambiguous
        }
        rows.push_back({a.alpha.real(), a.alpha.imag(), (long long)a.multiplicity, cls,
                        a.residual});
        scatter.push_back({a.alpha.real(), a.alpha.imag(), (long long)a.multiplicity});
    }
    store.write_csv("magic.csv", {"alpha_re", "alpha_im", "multiplicity", "class", "residual"},
                    rows);
    store.write_csv("scatter.csv", {"alpha_re", "alpha_im", "multiplicity"}, scatter);
    int reals = 0;
    for (const auto& a : res.alphas)
        if (a.alpha.real() > 0 && std::abs(a.alpha.imag()) < 1e-8) reals += a.multiplicity;
    if (reals >= 4) {
        auto rep = spacing_report(res.alphas);
        std::vector<std::vector<CsvCell>> srows;
        for (const auto& r : rep.rows) srows.push_back({(long long)r.k, r.alpha, r.gap});
        store.write_csv("spacings.csv", {"k", "alpha", "gap"}, srows);
        std::cout << "asymptotic spacing estimate: " << format_g17(rep.asymptote) << "\n";
    }
    store.finalize("magic", g.as_json("magic").dump());
    std::cout << "found " << res.alphas.size() << " magic alphas (|alpha| <= " << g.alpha_max
              << ", radius " << g.radius_shells << " |q|)\n";
    return 0;
}

int cmd_bands(const GlobalConfig& g, cplx alpha, int count, int samples, cplx k0, cplx k1) {
    ResultStore store(g.output);
    TrigPoly2 V = load_potential(g.potential);
    double radius = g.radius_shells * QLEN;
    ModeBasis basis(radius);
    std::vector<std::vector<CsvCell>> rows(samples);
    int nt = pool_size(g.threads);
    std::vector<std::thread> pool;
    std::atomic<int> next{0};
    auto work = [&] {
        for (int j = next++; j < samples; j = next++) {
            cplx k = k0 + (k1 - k0) * (double(j) / std::max(1, samples - 1));
            auto E = bands(V, alpha, k, basis, count);
            std::vector<CsvCell> row{k.real(), k.imag()};
            for (double e : E) row.push_back(e);
            rows[j] = std::move(row);
        }
    };
    for (int t = 0; t < nt; ++t) pool.emplace_back(work);
    for (auto& th : pool) th.join();
    std::vector<std::string> header{"k_re", "k_im"};
    for (int j = 1; j <= count; ++j) header.push_back("E" + std::to_string(j));
    store.write_csv("bands.csv", header, rows);
    auto cls = classify_alpha(V, alpha, radius);
    store.write_csv("class.csv",
                    {"alpha_re", "alpha_im", "class", "exponent", "slope", "wronskian_slope"},
                    {{alpha.real(), alpha.imag(), cls_string(cls), cls.exponent,
                      cls.kind == TrichotomyClass::DiracPoint ? cls.slope1 : 0.0,
                      cls.wronskian_slope}});
    store.finalize("bands", g.as_json("bands").dump());
    std::cout << "class: " << cls_string(cls) << " (exponent " << format_g17(cls.exponent)
              << ")\n";
    return 0;
}

int cmd_state(const GlobalConfig& g, cplx alpha, int grid) {
    ResultStore store(g.output);
    TrigPoly2 V = load_potential(g.potential);
    double radius = g.radius_shells * QLEN;
    auto st = protected_state(V, alpha, radius);
    std::vector<std::vector<CsvCell>> rows;
    rows.reserve(size_t(grid) * grid);
    double am = std::abs(alpha) > 1e-12 ? std::abs(alpha) : 1.0;
    for (int i = 0; i < grid; ++i)
        for (int j = 0; j < grid; ++j) {
            cplx z = double(i) / grid * TriangularLattice::omega() + double(j) / grid;
            cplx u = st.eval(z);
            rows.push_back({z.real(), z.imag(), u.real(), u.imag(),
                            std::log(std::abs(u) + 1e-300) / am});
        }
    store.write_csv("state.csv", {"x", "y", "re_u", "im_u", "log_abs_u_over_alpha"}, rows);

    std::vector<std::vector<CsvCell>> edge;
    for (int j = 0; j <= 400; ++j) {
        double t = 1.0 + double(j) / 400.0;
        cplx u = st.eval(cplx(0, t / std::sqrt(3.0)));
        edge.push_back({t, u.real(), u.imag()});
    }
    store.write_csv("edge.csv", {"t", "re_u", "im_u"}, edge);

    std::vector<std::vector<CsvCell>> zrows;
    for (const auto& zr : zero_census(st))
        zrows.push_back({zr.location.real(), zr.location.imag(), (long long)zr.multiplicity,
                         zr.value});
    store.write_csv("zeros.csv", {"x", "y", "multiplicity", "pair_norm"}, zrows);
    store.finalize("state", g.as_json("state").dump());
    std::cout << "state residual " << format_g17(st.residual) << ", " << zrows.size()
              << " zeros\n";
    return 0;
}

int cmd_wkb(const GlobalConfig& g, const std::string& compare, double alpha, double sweep_lo,
            double sweep_hi, int sweep_n) {
    ResultStore store(g.output);
    if (compare == "edge" || compare == "center") {
        TrigPoly2 V = scalar_V(henry_potential());
        double radius = std::max(g.radius_shells, 11.0 * alpha) * QLEN;
        auto st = protected_state(V, alpha, radius);
        std::vector<std::vector<CsvCell>> rows;
        auto lsq_scale = [](const std::vector<cplx>& u, const std::vector<cplx>& e) {
            cplx num = 0;
            double den = 0;
            for (size_t j = 0; j < u.size(); ++j) {
                num += std::conj(e[j]) * u[j];
                den += std::norm(e[j]);
            }
            return num / den;
        };
        if (compare == "edge") {
            const int n = 200;
            std::vector<cplx> u(n), e(n);
            std::vector<double> ts(n);
            for (int j = 0; j < n; ++j) {
                ts[j] = 1.0 + (j + 0.5) / n;
                cplx z(0, ts[j] / std::sqrt(3.0));
                u[j] = st.eval(z);
                e[j] = edge_ansatz(z, alpha);
            }
            cplx c = lsq_scale(u, e);
            double sup = 0;
            for (auto& v : u) sup = std::max(sup, std::abs(v));
            for (int j = 0; j < n; ++j)
                rows.push_back({ts[j], u[j].real(), (c * e[j]).real(),
                                std::abs(u[j] - c * e[j]) / sup});
            store.write_csv("wkb_edge.csv", {"t", "exact", "ansatz", "rel_err"}, rows);
        } else {
            const int n = 150;
            std::vector<cplx> u(n), e(n);
            std::vector<double> ys(n);
            for (int j = 0; j < n; ++j) {
                ys[j] = 0.02 + 0.2 * (j + 0.5) / n;
                cplx z(0, ys[j]);
                u[j] = st.eval(z);
                e[j] = center_ansatz(z, alpha);
            }
            cplx c = lsq_scale(u, e);
            double sup = 0;
            for (auto& v : u) sup = std::max(sup, std::abs(v));
            for (int j = 0; j < n; ++j)
                rows.push_back({ys[j], u[j].real(), (c * e[j]).real(),
                                std::abs(u[j] - c * e[j]) / sup});
            store.write_csv("wkb_center.csv", {"y", "exact", "ansatz", "rel_err"}, rows);
        }
        auto q = quantization_heuristic();
        store.write_csv("quantization.csv", {"delta_alpha", "phase_span", "quadrature_span"},
                        {{q.delta_alpha, q.phase_span, q.quadrature_span}});
    } else if (compare == "corner") {
        TrigPoly2 V = load_potential(g.potential == "henry" ? "bm-scalar" : g.potential);
        std::vector<std::vector<CsvCell>> rows;
        for (int j = 0; j < sweep_n; ++j) {
            double a = sweep_lo + (sweep_hi - sweep_lo) * j / std::max(1, sweep_n - 1);
            double radius = std::max(10.0, 2.0 * a) * QLEN;
            auto st = protected_state(V, a, radius);
            auto dec = airy_decompose(st, a);
            rows.push_back({a, dec.g0.real(), dec.g0.imag(), dec.g2.real(), dec.g2.imag()});
        }
        store.write_csv("corner_g.csv", {"alpha", "g0_re", "g0_im", "g2_re", "g2_im"}, rows);
    } else {
        throw std::invalid_argument("wkb: --compare must be edge, center or corner");
    }
    store.finalize("wkb", g.as_json("wkb").dump());
    return 0;
}

int cmd_toy(const GlobalConfig& g, const std::string& spec, cplx k, double h,
            const std::string& nrange, bool with_mult, const std::string& modes, double win_lo,
            double win_hi) {
    ResultStore store(g.output);
    TrigPoly1 W = TrigPoly1::parse_spec(spec);
    std::vector<std::vector<CsvCell>> rows;
    std::vector<std::string> header{"n",        "sign",     "mode",       "alpha_re",
                                    "alpha_im", "residual", "series_gap", "multiplicity"};
    if (!nrange.empty()) {
        auto dots = nrange.find("..");
        if (dots == std::string::npos) throw std::invalid_argument("toy: --n expects a..b");
        int n0 = std::stoi(nrange.substr(0, dots)), n1 = std::stoi(nrange.substr(dots + 2));
        auto loop = toy::stokes_loop(W);
        toy::QuantizationOptions qopt;
        qopt.multiplicities = with_mult;
        auto res = toy::quantization_roots(W, loop, k, h, n0, n1, qopt);
        for (const auto& r : res.roots)
            rows.push_back({(long long)r.n, (long long)r.sign, (long long)0,
                            r.alpha_exact.real(), r.alpha_exact.imag(), r.residual,
                            r.series_gap, (long long)r.multiplicity});
        std::vector<std::vector<CsvCell>> ltr;
        for (int j = 0; j <= 256; ++j) {
            double t = double(j) / 256.0;
            cplx gam = loop.gamma(t);
            cplx v = W.eval(gam) * loop.dgamma(t);
            ltr.push_back({t, gam.real(), gam.imag(), v.real(), v.imag()});
        }
        store.write_csv("loop.csv", {"t", "gamma_re", "gamma_im", "wgp_re", "wgp_im"}, ltr);
    }
    if (!modes.empty()) {
        auto dots = modes.find("..");
        if (dots == std::string::npos) throw std::invalid_argument("toy: --modes expects a..b");
        int m0 = std::stoi(modes.substr(0, dots)), m1 = std::stoi(modes.substr(dots + 2));
        auto entries = toy::kernel_set_2d(W, k, win_lo, win_hi, m0, m1);
        for (const auto& e : entries)
            rows.push_back({(long long)e.n, (long long)e.sign, (long long)e.mode,
                            e.alpha.real(), e.alpha.imag(), e.residual,
                            std::abs(e.alpha - e.alpha_naive), (long long)1});
    }
    store.write_csv("roots.csv", header, rows);
    store.finalize("toy", g.as_json("toy").dump());
    std::cout << rows.size() << " roots written\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"flat band workbench for the scalar moire model and its 1d toy"};
    app.require_subcommand(1);
    app.set_help_flag("--help", "print help");  // keep -h free for the toy flag
    app.fallthrough();

    GlobalConfig g;
    app.add_option("--output,-o", g.output, "output directory");
    app.add_option("--config", g.config_file, "JSON config file (flags take precedence)");
    app.add_option("--threads", g.threads, "worker pool size (FLATBAND_THREADS overrides)");

    std::vector<CLI::Option*> pot_opts, radius_opts, amax_opts;
    auto add_common = [&](CLI::App* c) {
        pot_opts.push_back(c->add_option("--potential", g.potential,
                                         "bm-scalar | henry | custom:FILE"));
        radius_opts.push_back(c->add_option("--radius", g.radius_shells,
                                            "truncation radius in |dual_scale| units"));
        amax_opts.push_back(c->add_option("--alpha-max", g.alpha_max, "coupling window bound"));
    };

    auto* magic = app.add_subcommand("magic", "locate the magic coupling set");
    add_common(magic);

    auto* bands_cmd = app.add_subcommand("bands", "band values along a k segment");
    add_common(bands_cmd);
    double alpha_re = 1.0, alpha_im = 0.0, kre0 = 0, kim0 = 0, kre1 = 3.6276, kim1 = 0;
    int count = 4, samples = 64;
    bands_cmd->add_option("--alpha", alpha_re, "coupling (real part)");
    bands_cmd->add_option("--alpha-im", alpha_im, "coupling imaginary part");
    bands_cmd->add_option("--count", count, "number of bands");
    bands_cmd->add_option("--k-samples", samples, "samples along the segment");
    bands_cmd->add_option("--k-from-re", kre0);
    bands_cmd->add_option("--k-from-im", kim0);
    bands_cmd->add_option("--k-to-re", kre1);
    bands_cmd->add_option("--k-to-im", kim1);

    auto* state = app.add_subcommand("state", "protected state grid, edge trace and zeros");
    add_common(state);
    int grid = 96;
    state->add_option("--alpha", alpha_re, "coupling (real part)");
    state->add_option("--alpha-im", alpha_im, "coupling imaginary part");
    state->add_option("--grid", grid, "grid resolution per cell direction");

    auto* wkb = app.add_subcommand("wkb", "WKB comparisons and corner decomposition");
    add_common(wkb);
    std::string compare = "edge";
    double sweep_lo = 3.0, sweep_hi = 8.0;
    int sweep_n = 26;
    wkb->add_option("--compare", compare, "edge | center | corner");
    wkb->add_option("--alpha", alpha_re, "coupling for edge/center comparisons");
    wkb->add_option("--sweep-lo", sweep_lo);
    wkb->add_option("--sweep-hi", sweep_hi);
    wkb->add_option("--sweep-n", sweep_n);

    auto* toy = app.add_subcommand("toy", "1d toy model: loops, roots, multiplicities");
    toy->set_help_flag("--help", "print help");
    std::string spec = "1+0.1cos", nrange = "1..20", modes;
    double k_re = 0.3, k_im = 0.0, h = 0.02, win_lo = 10.0, win_hi = 30.0;
    bool with_mult = false;
    toy->add_option("--potential", spec, "potential spec, e.g. \"1+0.1cos\"");
    toy->add_option("--k", k_re, "Floquet parameter (real part)");
    toy->add_option("--k-im", k_im, "Floquet parameter imaginary part");
    toy->add_option("--h", h, "semiclassical parameter");
    toy->add_option("--n", nrange, "root indices a..b");
    toy->add_option("--modes", modes, "2d mode range a..b (kernel set)");
    toy->add_option("--alpha-window-lo", win_lo);
    toy->add_option("--alpha-window-hi", win_hi);
    toy->add_flag("--mult", with_mult, "winding multiplicity per root");

    auto* check = app.add_subcommand("check", "run the acceptance suite");
    bool fast = false;
    check->add_flag("--fast", fast, "reduced truncation (quick sanity run)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        if (!g.config_file.empty()) {
            std::ifstream in(g.config_file);
            if (!in) throw std::invalid_argument("cannot open config " + g.config_file);
            json j;
            in >> j;
            auto unset = [](const std::vector<CLI::Option*>& opts) {
                for (auto* o : opts)
                    if (o->count()) return false;
                return true;
            };
            if (j.contains("potential") && unset(pot_opts)) g.potential = j["potential"];
            if (j.contains("radius_shells") && unset(radius_opts))
                g.radius_shells = j["radius_shells"];
            if (j.contains("alpha_max") && unset(amax_opts)) g.alpha_max = j["alpha_max"];
            if (j.contains("output") && app.count("--output") == 0)
                g.output = j["output"].get<std::string>();
        }
        if (magic->parsed()) return cmd_magic(g);
        if (bands_cmd->parsed())
            return cmd_bands(g, cplx(alpha_re, alpha_im), count, samples, cplx(kre0, kim0),
                             cplx(kre1, kim1));
        if (state->parsed()) return cmd_state(g, cplx(alpha_re, alpha_im), grid);
        if (wkb->parsed()) return cmd_wkb(g, compare, alpha_re, sweep_lo, sweep_hi, sweep_n);
        if (toy->parsed())
            return cmd_toy(g, spec, cplx(k_re, k_im), h, nrange, with_mult, modes, win_lo,
                           win_hi);
        if (check->parsed()) {
            ResultStore store(g.output);
            int bad = flatband::acceptance::run_all(std::cout, fast, &store);
            store.finalize("check", g.as_json("check").dump());
            return bad == 0 ? 0 : 2;
        }
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "{\"error\": \"" << e.what() << "\", \"code\": 3}" << std::endl;
        return 3;
    } catch (const std::invalid_argument& e) {
        std::cerr << "{\"error\": \"" << e.what() << "\", \"code\": 3}" << std::endl;
        return 3;
    } catch (const std::domain_error& e) {
        std::cerr << "{\"error\": \"" << e.what() << "\", \"code\": 3}" << std::endl;
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "{\"error\": \"" << e.what() << "\", \"code\": 4}" << std::endl;
        return 4;
    }
    return 0;
}
