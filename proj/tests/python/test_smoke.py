"""Smoke tests for the python bindings."""
import cmath
import math

import pytest

flatband = pytest.importorskip("_flatband")


def test_version_and_constants():
    assert flatband.__version__
    assert flatband.dual_scale == pytest.approx(4 * math.pi / math.sqrt(3))
    assert flatband.z_S == pytest.approx(1j / math.sqrt(3))


def test_potentials_and_eikonal():
    V = flatband.potential("henry")
    assert len(V) > 0
    W, phi = flatband.henry_w_and_phi()
    z = 0.21 + 0.13j
    h = 1e-6
    # 2 d_zbar phi = (d_x + i d_y) phi
    dz = (phi(z + h) - phi(z - h)) / (2 * h) + 1j * (phi(z + 1j * h) - phi(z - 1j * h)) / (2 * h)
    assert abs(dz - W(z)) < 1e-6


def test_bands_free_case():
    V = flatband.potential("henry")
    E = flatband.bands(V, 0.0, 0.4 + 0.1j, radius_shells=2.2, count=2)
    assert E[0] == pytest.approx(abs(0.4 + 0.1j), rel=1e-9)
    assert E[1] == pytest.approx(abs(0.4 + 0.1j), rel=1e-9)


def test_first_magic_alpha():
    V = flatband.potential("henry")
    alphas = flatband.find_magic(V, radius_shells=8.0, alpha_max=0.45)
    reals = sorted(a.alpha.real for a in alphas if a.alpha.real > 0 and abs(a.alpha.imag) < 1e-8)
    assert reals, "no real magic values found"
    assert reals[0] == pytest.approx(0.1395, abs=2e-4)


def test_protected_state_symmetry():
    V = flatband.potential("bm-scalar")
    st = flatband.protected_state(V, 1.0, radius_shells=6.0)
    z = 0.17 + 0.05j
    w = cmath.exp(2j * math.pi / 3)
    assert abs(st(w * z) - st(z)) < 1e-8
    assert abs(st(-z) - st(z)) < 1e-8


def test_special_functions():
    ai, aip = flatband.airy(1.0)
    assert ai == pytest.approx(0.13529241631288147, rel=1e-10)
    h1, h2 = flatband.hankel16(5.0)
    assert h1 == pytest.approx(-0.25077358432305596 - 0.2527897563547721j, rel=1e-9)
    assert flatband.quantization_spacing() == pytest.approx(0.25, abs=1e-12)


def test_toy_roots_constant_potential():
    W = flatband.TrigPoly1.parse("1")
    roots = flatband.quantization_roots(W, 0.3, 1.0 / 40, 1, 4)
    for r in roots:
        expect = 2 * math.pi * r["n"] / 40 + r["sign"] * 0.3
        assert abs(r["alpha"] - expect) < 1e-9


def test_toy_loop_and_multiplicity():
    W = flatband.TrigPoly1.parse("1+(0.1+0.05i)cos")
    loop = flatband.stokes_loop(W)
    assert loop.closure < 1e-8
    assert loop.winding == 0
    assert loop.positivity > 0
