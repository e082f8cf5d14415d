import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qsurf.algebra import apply_hom, normal_form
from qsurf.ktheory import (
    DefectWitness,
    disc_defect,
    expectation_E,
    index_E,
    matrix_units,
    quasi_basis_check,
    rp2_defect,
)
from qsurf.morphisms import reflection
from qsurf.rings import EXACT
from qsurf.suites import random_element
from qsurf.surfaces import equator

q = EXACT.q
P = equator()
A, B = P.gen("A"), P.gen("B")
Bs = B.star()


@pytest.mark.parametrize("N", [16, 32, 64, 128])
def test_defect_ranks(N):
    r = rp2_defect(0.5, N)
    d = disc_defect(0.5, N)
    assert r.rank == 2 and d.rank == 1
    assert abs(d.trace - 1.0) < 1e-8
    for w in (r, d):
        assert w.projection_residual() < 1e-10
        assert w.hermitian_residual() < 1e-12
        assert w.coisometry_residual() < 1e-10


def test_rp2_double_shift():
    U = rp2_defect(0.3, 16).U
    assert np.allclose(U[:, :2], 0)
    for n in range(2, 16):
        col = np.zeros(16)
        col[n - 2] = 1
        assert np.allclose(U[:, n], col, atol=1e-12)


def test_defect_errors():
    with pytest.raises(ValueError):
        rp2_defect(0.5, 4)
    with pytest.raises(ValueError):
        disc_defect(0.5, 2)
    w = DefectWitness(np.eye(2), np.diag([0.5, 0.0]), np.arange(2))
    with pytest.raises(ValueError):
        w.rank


def test_matrix_units():
    mu = matrix_units(0.5, 32, 4)
    e00 = np.zeros((32, 32))
    e00[0, 0] = 1
    assert np.allclose(mu[0, 0], e00)
    assert np.allclose(mu[0, 1] @ mu[1, 0], mu[0, 0])
    assert np.allclose(mu[1, 2].conj().T, mu[2, 1])
    assert mu.residual() < 1e-10
    assert mu.span_dimension() == 25
    assert mu.resolved
    with pytest.raises(ValueError):
        matrix_units(0.5, 8, 6)


def test_expectation_examples():
    assert expectation_E(A).is_zero()
    assert expectation_E(A * B) == normal_form(A * B, P)
    assert expectation_E(P.one()) == P.one()


def test_quasi_basis_terms():
    assert expectation_E(B).is_zero()
    assert normal_form(expectation_E(B * A) * A, P) == normal_form(q**4 * A * A * B, P)
    assert normal_form(expectation_E(B * Bs) * B, P) == normal_form(B - q**4 * A * A * B, P)
    assert quasi_basis_check(B) and quasi_basis_check(P.one())
    with pytest.raises(ValueError):
        quasi_basis_check(B, order="middle")


def test_index():
    assert index_E() == 2 * P.one()


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_expectation_properties(seed):
    rng = np.random.default_rng(seed)
    a = random_element(rng, P, ("A", "B", "B*"), 5)
    e = expectation_E(a)
    assert expectation_E(e) == e
    r2 = reflection("r2_symbolic")
    assert expectation_E(apply_hom(r2, a)) == e
    assert quasi_basis_check(a, "both")
