import math

import numpy as np
import pytest

from qsurf.algebra import normal_form
from qsurf.reps import build_rep, represent
from qsurf.rings import EXACT, FloatRing
from qsurf.surfaces import (
    INF,
    SphereParams,
    build_presentation,
    cartesian_coordinates,
    disc,
    equator,
    geometry_constants,
    rp2,
    sphere,
    tilded_generators,
    z_ladder,
)

q = EXACT.q
GRID_Q = (0.3, 0.5, 0.9)
GRID_C = (0.0, 0.5, 1.0, 10.0, INF)


@pytest.mark.parametrize("p", [equator(), sphere(), sphere(c=0), sphere(c=0.5), sphere(c=10),
                               disc(), disc(deformation=q**4), rp2()], ids=lambda p: p.name)
def test_relations_normalize_to_zero(p):
    for label, lhs, rhs in p.relations:
        assert normal_form(lhs - rhs, p).is_zero(), label
    for lhs in p.rules:
        assert not p.basis(lhs)


def test_stated_normal_forms():
    e = equator()
    A, B = e.gen("A"), e.gen("B")
    assert normal_form(B.star() * B, e) == e.one() - A * A
    r = rp2()
    T, P = r.gen("T"), r.gen("P")
    assert normal_form(T.star() * T, r) == q**-4 * (P - P * P)
    d = disc()
    x = d.gen("x")
    assert normal_form(x.star() * x, d) == q * x * x.star() + (1 - q) * d.one()


def test_rp2_rule_orientation():
    r = rp2()
    P, R, T = r.gen("P"), r.gen("R"), r.gen("T")
    Rs, Ts = R.star(), T.star()
    assert normal_form(R * T, r) == q**4 * T * R
    assert normal_form(T * T, r) == q**2 * P * R
    assert normal_form(R * Ts, r) == q**2 * T - q**10 * P * T
    assert normal_form(Ts * P, r) == q**-4 * P * Ts
    assert normal_form(Rs * P, r) == q**-8 * P * Rs
    assert normal_form(Rs * Ts, r) == q**-4 * Ts * Rs
    assert normal_form(Ts * Ts, r) == q**-6 * P * Rs


def test_rp2_basis_shape():
    r = rp2()
    for w in [(), ("P", "P", "R"), ("P", "T", "R", "R"), ("R*",), ("P", "T*", "R*")]:
        assert r.basis(w)
    for w in [("R", "P"), ("T", "T"), ("T", "R*"), ("T*", "R")]:
        assert not r.basis(w)


def test_build_presentation_dispatch():
    assert build_presentation("sphere", c=INF).name == "equator"
    assert build_presentation("disc").name == "disc"
    with pytest.raises(ValueError):
        build_presentation("torus")
    with pytest.raises(ValueError):
        sphere(c=-1.0)


def test_sphere_params_validation():
    with pytest.raises(ValueError):
        SphereParams(1.0)
    with pytest.raises(ValueError):
        SphereParams(0.5, -0.1)
    assert SphereParams(0.5).is_equator


def test_geometry_constants_examples():
    assert geometry_constants(SphereParams(0.5, INF)).z_inf == 0.0
    assert geometry_constants(SphereParams(0.5, 0.0)).z_inf == -1.0
    g = geometry_constants(SphereParams(0.5, 2.0))
    assert g.lam_plus == 2.0
    # lambda_pm are the roots of t^2 - t - c
    for lam in (g.lam_plus, g.lam_minus):
        assert lam * lam - lam - 2.0 == pytest.approx(0.0, abs=1e-15)
    assert geometry_constants(SphereParams(0.5, INF)).Q_h == pytest.approx(0.5)


@pytest.mark.parametrize("qv", GRID_Q)
def test_equator_limits_match_large_c(qv):
    lim = geometry_constants(SphereParams(qv, INF))
    big = geometry_constants(SphereParams(qv, 1e14))
    assert big.scaled_z_inf == pytest.approx(lim.scaled_z_inf, rel=1e-6)
    assert big.z_inf_lam_plus == pytest.approx(lim.z_inf_lam_plus, rel=1e-6)
    assert big.z_inf_lam_minus == pytest.approx(lim.z_inf_lam_minus, rel=1e-6)
    assert big.Q_h == pytest.approx(lim.Q_h, rel=1e-6)


@pytest.mark.parametrize("c", [0.0, 0.5, 1.0, 10.0])
def test_c_pm_nonnegative(c):
    g = geometry_constants(SphereParams(0.5, c))
    assert -1.0 <= g.z_inf <= 0.0
    assert all(g.c_plus(k) >= 0 and g.c_minus(k) >= -1e-15 for k in range(1, 60))


def test_tilded_generators():
    A0, B0 = tilded_generators(SphereParams(0.5, 0.0))
    assert A0.coefficient(("Ac",)) == 1
    Ai, Bi = tilded_generators(SphereParams(0.5, INF))
    assert Ai.words() == [("A",)]
    c, qv = 4.0, 0.5
    ring = FloatRing(qv, c)
    p = sphere(ring, c)
    At, Bt = tilded_generators(SphereParams(qv, c), ring)
    s = 1 + math.sqrt(c)
    rhs = At * (1 / s) - At * At + p.one() * (c / s**2)
    assert normal_form(Bt.star() * Bt - rhs, p).max_coefficient() < 1e-14


@pytest.mark.parametrize("qv", GRID_Q)
@pytest.mark.parametrize("c", GRID_C)
def test_cartesian_identity(qv, c):
    sp = SphereParams(qv, c)
    ring = FloatRing(qv, c)
    p = sphere(ring, c)
    x, y, z = cartesian_coordinates(sp, ring)
    assert normal_form(x * x + y * y + z * z - p.one(), p).max_coefficient() < 1e-12
    for v in (x, y, z):
        assert normal_form(v - v.star(), p).max_coefficient() < 1e-15


def test_cartesian_needs_float_ring():
    with pytest.raises(ValueError):
        cartesian_coordinates(SphereParams(0.5), EXACT)


@pytest.mark.parametrize("theta", [0.0, 0.4, 2.0, 4.5])
def test_theta_point_at_equator(theta):
    # x = (i/2)(B - B*), y = (B + B*)/2 with B = e^(i theta)
    sp = SphereParams(0.5)
    x, y, z = cartesian_coordinates(sp)
    r = build_rep("sphere_theta", 0.5, 1, INF, theta)
    vals = [complex(represent(v, r)[0, 0]) for v in (x, y, z)]
    b = complex(math.cos(theta), math.sin(theta))
    assert vals[0] == pytest.approx(0.5j * (b - b.conjugate()), abs=1e-15)
    assert vals[0] == pytest.approx(-math.sin(theta), abs=1e-15)
    assert vals[1] == pytest.approx(math.cos(theta), abs=1e-15)
    assert vals[2] == pytest.approx(0.0, abs=1e-15)


@pytest.mark.parametrize("c", [0.5, 1.0, 10.0])
def test_theta_circle_height(c):
    sp = SphereParams(0.3, c)
    g = geometry_constants(sp)
    x, y, z = cartesian_coordinates(sp)
    for theta in np.linspace(0, 6, 5):
        r = build_rep("sphere_theta", 0.3, 1, c, theta)
        vx, vy, vz = (complex(represent(v, r)[0, 0]) for v in (x, y, z))
        assert abs(vz - g.z_inf) < 1e-12
        assert abs(vx**2 + vy**2 + vz**2 - 1) < 1e-12


@pytest.mark.parametrize("c", GRID_C)
def test_ladder(c):
    sp = SphereParams(0.5, c)
    g = geometry_constants(sp)
    x, y, z = cartesian_coordinates(sp)
    for sign, kind in ((1, "sphere_plus"), (-1, "sphere_minus")):
        ladder = z_ladder(sp, sign, 63)
        diag = np.diag(represent(z, build_rep(kind, 0.5, 64, c))).real
        assert np.abs(diag - ladder).max() < 1e-10
        assert abs(z_ladder(sp, sign, 40)[-1] - g.z_inf) < 1e-8
        if c > 0:
            assert all(sign * (zk - g.z_inf) >= 0 for zk in ladder)
        steps = np.abs(np.diff(np.array(ladder) - g.z_inf))
        assert np.all(np.diff(np.abs(np.array(ladder) - g.z_inf)) <= 0) or c == 0
        del steps


def test_ladder_special_cases():
    plus = z_ladder(SphereParams(0.5, INF), 1, 10)
    minus = z_ladder(SphereParams(0.5, INF), -1, 10)
    assert np.allclose(plus, -np.array(minus), atol=1e-15)
    assert z_ladder(SphereParams(0.5, 0.0), -1, 10) == [-1.0] * 11
    with pytest.raises(ValueError):
        z_ladder(SphereParams(0.5), 2, 3)
