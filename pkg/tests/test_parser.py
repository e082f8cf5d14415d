import numpy as np
import pytest

from qsurf.algebra import normal_form
from qsurf.parser import ParseError, parse_expression, presentation_for
from qsurf.rings import EXACT, FloatRing
from qsurf.suites import random_element

q = EXACT.q

HANDWRITTEN = [
    ("equator", "B*B + A^2 - 1"),
    ("equator", "q^2*A*B"),
    ("equator", "(A + B')^3"),
    ("equator", "-B'*A + 3/2*q^-2*A*B'"),
    ("equator", "i*B - i*B'"),
    ("equator", "(1 - q^2)^2*(A - 1/4)"),
    ("rp2", "T'*T - q^-4*(P - P^2)"),
    ("rp2", "R*T' - q^2*T + q^10*P*T"),
    ("rp2", "(T + R')*(P - T')"),
    ("disc", "x'*x - q*x*x' - (1 - q)"),
    ("disc", "2*x^2*x'"),
    ("sphere", "Bc'*Bc + Ac^2 - Ac - c"),
]


def corpus():
    out = list(HANDWRITTEN)
    rng = np.random.default_rng(7)
    letters = {"equator": ("A", "B", "B*"), "rp2": ("P", "T", "T*", "R", "R*"), "disc": ("x", "x*")}
    algebras = ["equator", "rp2", "disc"]
    while len(out) < 50:
        alg = algebras[len(out) % 3]
        a = random_element(rng, presentation_for(alg), letters[alg], 4)
        out.append((alg, str(a)))
    return out


def test_examples():
    e = parse_expression("B*B + A^2 - 1", "equator")
    assert len(e.terms) == 3
    e = parse_expression("q^2*A*B", "equator")
    assert e.words() == [("A", "B")] and e.coefficient(("A", "B")) == q**2
    p = presentation_for("rp2")
    assert normal_form(parse_expression("T'*T - q^-4*(P - P^2)", "rp2"), p).is_zero()


def test_float_ring_and_c():
    e = parse_expression("c*Ac", "sphere", FloatRing(0.5, 2.0), c=2.0)
    assert e.coefficient(("Ac",)) == pytest.approx(2.0)
    e = parse_expression("q*A", "equator", FloatRing(0.5))
    assert e.coefficient(("A",)) == pytest.approx(0.5)
    assert presentation_for("sphere", c=float("inf")).name == "equator"
    assert presentation_for("sphere").name == "sphere"


@pytest.mark.parametrize("alg,text", corpus())
def test_round_trip(alg, text):
    kw = {"c": 2} if alg == "sphere" else {}
    p = presentation_for(alg, c=kw.get("c"))
    nf = normal_form(parse_expression(text, alg, **kw), p)
    back = normal_form(parse_expression(str(nf), alg, **kw), p)
    assert back == nf


@pytest.mark.parametrize("text,pos", [
    ("A +", 3),
    ("A ** B", 3),
    ("A $ B", 2),
    ("(A + B", 6),
    ("Z*A", 0),
    ("A^-2", 3),
    ("A^1.5", 2),
    ("A/B", 2),
    ("A/0", 2),
    ("A B", 2),
])
def test_errors_report_positions(text, pos):
    with pytest.raises(ParseError) as info:
        parse_expression(text, "equator")
    assert info.value.position == pos


def test_unknown_generator_message():
    with pytest.raises(ParseError, match="unknown generator 'x'"):
        parse_expression("x", "equator")
    with pytest.raises(ValueError):
        parse_expression("A", "torus")
