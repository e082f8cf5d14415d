import math

import numpy as np
import pytest

from qsurf.algebra import Element, normal_form
from qsurf.reps import (
    build_rep,
    combine,
    precise_residual,
    relation_residual,
    represent,
    shift_matrix,
    spectrum,
)
from qsurf.rings import EXACT
from qsurf.surfaces import INF, disc, equator, rp2, sphere

q = EXACT.q


def test_sphere_entries():
    qv = 0.5
    r = build_rep("sphere_plus", qv, 8)
    assert r["A"][2, 2] == pytest.approx(qv**4)
    for k in range(1, 8):
        assert r["B"][k - 1, k] == pytest.approx(math.sqrt(1 - qv ** (4 * k)))
    assert np.allclose(build_rep("sphere_minus", qv, 8)["A"], -r["A"])


def test_rp2_entries():
    qv = 0.5
    r = build_rep("rp2_infinite", qv, 8)
    assert r["T"][0, 1] == pytest.approx(math.sqrt(1 - qv**4))
    assert r["T"][1, 2] == pytest.approx(qv**2 * math.sqrt(1 - qv**8))
    assert r["R"][0, 2] == pytest.approx(math.sqrt((1 - qv**4) * (1 - qv**8)))
    assert np.allclose(np.diag(r["P"]).real, [qv ** (4 * k) for k in range(8)])


def test_disc_entries():
    qv = 0.5
    r = build_rep("disc_infinite", qv, 6)
    for k in range(5):
        assert r["x"][k + 1, k] == pytest.approx(math.sqrt(1 - qv ** (k + 1)))


@pytest.mark.parametrize("theta", [0.0, 1.0, 5.0])
def test_theta_reps(theta):
    b = build_rep("sphere_theta", 0.5, theta=theta)["B"]
    assert b[0, 0] == pytest.approx(complex(math.cos(theta), math.sin(theta)))
    r = build_rep("sphere_theta", 0.5, c=4.0, theta=theta)
    assert abs(r["Bc"][0, 0]) == pytest.approx(2.0)
    assert build_rep("sphere_theta", 0.5, c=0.0, theta=theta).meta["theta_independent"]


def test_unit_and_square():
    p = equator()
    r = build_rep("sphere_plus", 0.5, 16)
    assert np.allclose(represent(p.one(), r), np.eye(16))
    A = p.gen("A")
    rho = build_rep("rp2_infinite", 0.5, 16)
    assert np.allclose(represent(A * A, r), rho["P"])


@pytest.mark.parametrize("kind,pres", [
    ("sphere_plus", equator()), ("sphere_minus", equator()), ("rp2_infinite", rp2()),
    ("disc_infinite", disc()),
])
def test_residuals_shrink_with_size(kind, pres):
    res = [relation_residual(pres, build_rep(kind, 0.5, n)) for n in (16, 64, 128)]
    assert all(x < 1e-12 for x in res)
    assert res[0] >= res[1] - 1e-15 >= res[2] - 2e-15


@pytest.mark.parametrize("c", [0.0, 0.5, 10.0])
def test_finite_c_residuals(c):
    p = sphere(c=c)
    for kind in ("sphere_plus", "sphere_minus"):
        assert relation_residual(p, build_rep(kind, 0.5, 64, c)) < 1e-12
    assert build_rep("sphere_plus", 0.5, 8, 0.0).meta.get("faithful")
    assert build_rep("sphere_minus", 0.5, 8, 0.0).meta.get("trivial")


def test_spectrum():
    r = build_rep("sphere_plus", 0.5, 10)
    ev = spectrum(r["A"])
    assert np.allclose(ev, sorted(0.5 ** (2 * k) for k in range(10)))
    with pytest.raises(ValueError):
        spectrum(r["B"])
    with pytest.raises(ValueError):
        spectrum(np.zeros((2, 3)))


def test_shift_matrix():
    m = shift_matrix([1, 2, 3], 1, 3)
    assert np.allclose(m, [[0, 2, 0], [0, 0, 3], [0, 0, 0]])


def test_build_errors():
    for args in [("sphere_plus", 1.0), ("torus", 0.5), ("sphere_plus", 0.5, 2)]:
        with pytest.raises(ValueError):
            build_rep(*args)
    with pytest.raises(ValueError):
        build_rep("sphere_plus", 0.5, 8, -1.0)
    with pytest.raises(ValueError):
        build_rep("sphere_theta", 0.5, theta=7.0)


def test_combine():
    a = build_rep("sphere_plus", 0.5, 8)
    b = build_rep("sphere_minus", 0.5, 8)
    s = combine(a, b)
    assert s.dim == 16 and len(s.meta["forms"]) == 2
    assert relation_residual(equator(), s) < 1e-12
    flip = np.zeros((16, 16))
    flip[:8, 8:] = flip[8:, :8] = np.eye(8)
    t = combine(s, mode="conjugate_by", U=flip)
    assert np.allclose(t["A"][:8, :8], b["A"])
    assert relation_residual(equator(), t) < 1e-12
    assert "forms" not in t.meta
    with pytest.raises(ValueError):
        combine(a)
    with pytest.raises(ValueError):
        combine(a, build_rep("rp2_infinite", 0.5, 8))
    with pytest.raises(ValueError):
        combine(a, build_rep("sphere_plus", 0.3, 8))
    with pytest.raises(ValueError):
        combine(a, mode="conjugate_by", U=np.ones((8, 8)))
    rot = np.eye(8, dtype=complex)
    rot[:2, :2] = np.array([[1, 1], [1, -1]]) / math.sqrt(2)
    with pytest.raises(ValueError):
        combine(a, mode="conjugate_by", U=rot)
    with pytest.raises(ValueError):
        combine(a, b, mode="tensor")


def test_precise_residual_agrees_with_float():
    p = equator()
    A, B = p.gen("A"), p.gen("B")
    # BA = q^2 AB in the lowering representation
    a = B * A * B.star() - q**2 * A * B * B.star()
    r = build_rep("sphere_plus", 0.5, 32)
    assert precise_residual(a, r) < 1e-60
    wrong = B * A * B.star() - q**4 * A * B * B.star()
    cols = r.protected(2)
    float_val = float(np.max(np.abs(represent(wrong, r)[:, cols])))
    assert precise_residual(wrong, r) == pytest.approx(float_val, rel=1e-10)
    assert float_val > 1e-3


def test_precise_residual_needs_spec():
    p = equator()
    r = build_rep("sphere_theta", 0.5)
    with pytest.raises((ValueError, KeyError)):
        precise_residual(p.gen("A"), r)


def test_precise_residual_on_rp2_normal_form():
    p = rp2()
    T, R = p.gen("T"), p.gen("R")
    a = R.star() * T.star() * T * R
    diff = a - normal_form(a, p)
    assert isinstance(diff, Element)
    assert precise_residual(diff, build_rep("rp2_infinite", 0.3, 40)) < 1e-60
