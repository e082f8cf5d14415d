import math
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from qsurf.rings import EXACT, FloatRing, Laurent

small = st.integers(-4, 4)
laurents = st.dictionaries(
    st.tuples(st.integers(-6, 6), st.integers(0, 2)),
    st.tuples(st.fractions(max_denominator=6).filter(lambda x: abs(x) < 10), small.map(Fraction)),
    max_size=4,
).map(Laurent)


def test_constants_and_symbols():
    q, c = EXACT.q, EXACT.c
    assert (q * q.inverse()) == Laurent.const(1)
    assert (q**-3) * q**3 == 1
    assert str(q**-4) == "q^-4"
    assert str(Fraction(3, 2) * q**2 * c) == "3/2*q^2*c"
    assert str(Laurent.gaussian(Fraction(1, 2), 1)) == "(1/2 + i)"
    assert str(Laurent()) == "0"


def test_inverse_only_for_units():
    with pytest.raises(ZeroDivisionError):
        (1 + EXACT.q).inverse()
    with pytest.raises(ZeroDivisionError):
        EXACT.c.inverse()
    z = Laurent.gaussian(3, 4) * EXACT.q**2
    assert z * z.inverse() == 1


def test_conjugation_fixes_q_and_c():
    x = Laurent.gaussian(1, 2) * EXACT.q**3 + EXACT.c
    assert x.conjugate() == Laurent.gaussian(1, -2) * EXACT.q**3 + EXACT.c
    assert x.conjugate().conjugate() == x


def test_evaluate():
    x = 2 * EXACT.q**-2 - EXACT.c
    assert x.evaluate(0.5, 3.0) == pytest.approx(5.0)
    with pytest.raises(ValueError):
        x.evaluate(0.5)


@given(laurents, laurents, laurents)
def test_ring_axioms(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a * b == b * a
    assert a - a == 0


@given(laurents, laurents)
def test_evaluation_is_a_homomorphism(a, b):
    q, c = 0.7, 1.3
    lhs = (a * b).evaluate(q, c)
    rhs = a.evaluate(q, c) * b.evaluate(q, c)
    assert abs(lhs - rhs) <= 1e-9 * max(1.0, abs(lhs))


def test_exact_sqrt():
    assert EXACT.sqrt(Laurent.const(Fraction(9, 4))) == Fraction(3, 2)
    with pytest.raises(ValueError):
        EXACT.sqrt(Laurent.const(2))


def test_float_ring():
    r = FloatRing(0.5, 2.0, eps=1e-9)
    assert r.coerce(EXACT.q**2 + EXACT.c) == pytest.approx(2.25)
    assert r.is_zero(1e-10)
    assert not r.is_zero(1e-8)
    assert r.conj(1 + 2j) == 1 - 2j
    with pytest.raises(ValueError):
        FloatRing(0.5).c
    assert math.isinf(FloatRing(0.5).cval)
