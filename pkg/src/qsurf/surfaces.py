"""Quantum spheres, the quantum disc and quantum RP^2 as presentations.

Rule orientation (termination argument).  Every rule either

* shortens the word,
* keeps the length but lowers the number of non-diagonal letters
  (``B*B -> 1 - A^2``, ``T*T -> q^-4 (P - P^2)``, ``T^2 -> q^2 P R``), or
* swaps an adjacent pair into the order ``A < B, B*`` (sphere),
  ``x < x*`` (disc) or ``P < T, T* < R, R*`` (RP^2).

So ``(length, #non-diagonal letters, #inversions)`` strictly decreases
lexicographically, and each quantity is additive over a context, which
means rewriting terminates.  Confluence is checked against the matrix
representations in the test suite rather than proved here.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from .algebra import Alphabet, Element, Presentation, words_matching
from .rings import EXACT, FloatRing, Laurent

__all__ = [
    "INF",
    "SphereParams",
    "GeometryConstants",
    "build_presentation",
    "equator",
    "sphere",
    "disc",
    "rp2",
    "geometry_constants",
    "tilded_generators",
    "cartesian_coordinates",
    "z_ladder",
    "EQUATOR_ALPHABET",
    "SPHERE_ALPHABET",
    "DISC_ALPHABET",
    "RP2_ALPHABET",
]

INF = math.inf

EQUATOR_ALPHABET = Alphabet(("A", "B"), frozenset({"A"}))
SPHERE_ALPHABET = Alphabet(("Ac", "Bc"), frozenset({"Ac"}))
DISC_ALPHABET = Alphabet(("x",))
RP2_ALPHABET = Alphabet(("P", "R", "T"), frozenset({"P"}))

# Shift amplitude of each letter in the infinite-dimensional representations.
AMPLITUDES = {
    "A": 0, "B": 1, "B*": 1,
    "Ac": 0, "Bc": 1, "Bc*": 1,
    "x": 1, "x*": 1,
    "P": 0, "T": 1, "T*": 1, "R": 2, "R*": 2,
}


@dataclass(frozen=True)
class SphereParams:
    """Deformation ``q`` in (0, 1) and sphere parameter ``c`` in [0, inf]."""

    q: float
    c: float = INF

    def __post_init__(self):
        if not 0.0 < self.q < 1.0:
            raise ValueError(f"q must lie in (0, 1), got {self.q}")
        if not (self.c >= 0.0):
            raise ValueError(f"c must be >= 0 or inf, got {self.c}")

    @property
    def is_equator(self) -> bool:
        return math.isinf(self.c)


def _rel(label, lhs, rhs):
    return (label, lhs, rhs)


def equator(ring=EXACT) -> Presentation:
    """The c = inf sphere: generators A = A*, B."""
    alpha = EQUATOR_ALPHABET
    q = ring.q

    def E(*words_coefs):
        return Element(ring, alpha, dict(words_coefs))

    A, B, Bs = "A", "B", "B*"
    rules = {
        (B, A): E(((A, B), q**2)),
        (Bs, A): E(((A, Bs), q**-2)) if ring.exact else E(((A, Bs), 1 / q**2)),
        (Bs, B): E(((), 1), ((A, A), -1)),
        (B, Bs): E(((), 1), ((A, A), -(q**4))),
    }
    w = lambda *x: Element.word(x, ring, alpha)  # noqa: E731
    one = Element.scalar(1, ring, alpha)
    relations = [
        _rel("BA = q^2 AB", w(B, A), q**2 * w(A, B)),
        _rel("B*B = -A^2 + 1", w(Bs, B), -w(A, A) + one),
        _rel("BB* = -q^4 A^2 + 1", w(B, Bs), -(q**4) * w(A, A) + one),
        _rel("BB* - q^4 B*B = (1 - q^4) 1", w(B, Bs) - q**4 * w(Bs, B), (1 - q**4) * one),
    ]
    basis = words_matching(r"a*(b*|c*)", {A: "a", B: "b", Bs: "c"})
    return Presentation("equator", ring, alpha, rules, relations, basis, AMPLITUDES, {"c": INF})


def sphere(ring=EXACT, c=None) -> Presentation:
    """Podles sphere with generators Ac = Ac*, Bc.

    ``c=None`` keeps ``c`` symbolic (exact ring only); ``c=inf`` returns
    the equator presentation.
    """
    if c is None:
        cc, cval = ring.c, None
    elif isinstance(c, Laurent):
        cc, cval = c, None
    else:
        cval = float(c)
        if math.isinf(cval):
            return equator(ring)
        if cval < 0:
            raise ValueError("c must be non-negative")
        cc = ring.coerce(Fraction(str(c)) if ring.exact and isinstance(c, float) else c)
    alpha = SPHERE_ALPHABET
    q = ring.q
    A, B, Bs = "Ac", "Bc", "Bc*"

    def E(*words_coefs):
        return Element(ring, alpha, dict(words_coefs))

    qm2 = q**-2 if ring.exact else 1 / q**2
    rules = {
        (B, A): E(((A, B), q**2)),
        (Bs, A): E(((A, Bs), qm2)),
        (Bs, B): E(((A,), 1), ((A, A), -1), ((), cc)),
        (B, Bs): E(((A,), q**2), ((A, A), -(q**4)), ((), cc)),
    }
    w = lambda *x: Element.word(x, ring, alpha)  # noqa: E731
    one = Element.scalar(1, ring, alpha)
    relations = [
        _rel("BcAc = q^2 AcBc", w(B, A), q**2 * w(A, B)),
        _rel("Bc*Bc = Ac - Ac^2 + c", w(Bs, B), w(A) - w(A, A) + cc * one),
        _rel("BcBc* = q^2 Ac - q^4 Ac^2 + c", w(B, Bs), q**2 * w(A) - q**4 * w(A, A) + cc * one),
    ]
    basis = words_matching(r"a*(b*|c*)", {A: "a", B: "b", Bs: "c"})
    return Presentation("sphere", ring, alpha, rules, relations, basis, AMPLITUDES, {"c": cval})


def disc(ring=EXACT, deformation=None) -> Presentation:
    """Quantum disc x*x - s xx* = 1 - s with ``s = deformation`` (default q)."""
    s = ring.q if deformation is None else ring.coerce(deformation)
    alpha = DISC_ALPHABET
    rules = {("x*", "x"): Element(ring, alpha, {("x", "x*"): s, (): 1 - s})}
    w = lambda *x: Element.word(x, ring, alpha)  # noqa: E731
    one = Element.scalar(1, ring, alpha)
    relations = [_rel("x*x - s xx* = 1 - s", w("x*", "x") - s * w("x", "x*"), (1 - s) * one)]
    basis = words_matching(r"a*b*", {"x": "a", "x*": "b"})
    return Presentation("disc", ring, alpha, rules, relations, basis, AMPLITUDES, {"deformation": s})


def rp2(ring=EXACT) -> Presentation:
    """Quantum RP^2 with generators P = P*, R, T.

    Basis words: P^k R^l, P^k T R^l, P^m R*^(n+1), P^m T* R*^n.
    """
    alpha = RP2_ALPHABET
    q = ring.q

    def qp(n):
        return q**n if ring.exact or n >= 0 else 1 / q ** (-n)

    def E(*words_coefs):
        return Element(ring, alpha, dict(words_coefs))

    P, R, Rs, T, Ts = "P", "R", "R*", "T", "T*"
    rules = {
        # P moves left
        (R, P): E(((P, R), qp(8))),
        (Rs, P): E(((P, Rs), qp(-8))),
        (T, P): E(((P, T), qp(4))),
        (Ts, P): E(((P, Ts), qp(-4))),
        # at most one T-type letter
        (T, T): E(((P, R), qp(2))),
        (Ts, Ts): E(((P, Rs), qp(-6))),
        (Ts, T): E(((P,), qp(-4)), ((P, P), -qp(-4))),
        (T, Ts): E(((P,), 1), ((P, P), -qp(4))),
        # T-type letters move left of R-type letters
        (R, T): E(((T, R), qp(4))),
        (Rs, Ts): E(((Ts, Rs), qp(-4))),
        (R, Ts): E(((T,), qp(2)), ((P, T), -qp(10))),
        (Rs, T): E(((Ts,), qp(-2)), ((P, Ts), -qp(-6))),
        (T, Rs): E(((Ts,), qp(2)), ((P, Ts), -qp(6))),
        (Ts, R): E(((T,), qp(-2)), ((P, T), -qp(-2))),
        # R and R* annihilate
        (R, Rs): E(((P, P), qp(12)), ((P,), -qp(4) - qp(8)), ((), 1)),
        (Rs, R): E(((P, P), qp(-4)), ((P,), -1 - qp(-4)), ((), 1)),
    }
    w = lambda *x: Element.word(x, ring, alpha)  # noqa: E731
    one = Element.scalar(1, ring, alpha)
    relations = [
        _rel("T^2 = q^2 PR", w(T, T), qp(2) * w(P, R)),
        _rel("RT* = q^2 T(-q^4 P + 1)", w(R, Ts), qp(2) * (w(T) * (-qp(4) * w(P) + one))),
        _rel("R*T = q^-2 T*(-P + 1)", w(Rs, T), qp(-2) * (w(Ts) * (-w(P) + one))),
        _rel("RR* = q^12 P^2 - q^4(1 + q^4) P + 1", w(R, Rs),
             qp(12) * w(P, P) - qp(4) * (1 + qp(4)) * w(P) + one),
        _rel("R*R = q^-4 P^2 - (1 + q^-4) P + 1", w(Rs, R),
             qp(-4) * w(P, P) - (1 + qp(-4)) * w(P) + one),
        _rel("TT* = -q^4 P^2 + P", w(T, Ts), -qp(4) * w(P, P) + w(P)),
        _rel("T*T = q^-4 (P - P^2)", w(Ts, T), qp(-4) * (w(P) - w(P, P))),
        _rel("RP = q^8 PR", w(R, P), qp(8) * w(P, R)),
        _rel("RT = q^4 TR", w(R, T), qp(4) * w(T, R)),
        _rel("PT = q^-4 TP", w(P, T), qp(-4) * w(T, P)),
    ]
    # star images of the non-selfadjoint relations
    for label, lhs, rhs in list(relations):
        sl, sr = lhs.star(), rhs.star()
        if sl != lhs or sr != rhs:
            relations.append(_rel(f"({label})*", sl, sr))
    basis = words_matching(r"p*(tr*|r*|s*|us*)", {P: "p", R: "r", Rs: "s", T: "t", Ts: "u"})
    return Presentation("rp2", ring, alpha, rules, relations, basis, AMPLITUDES, {})


def build_presentation(kind: str, ring=EXACT, **params) -> Presentation:
    """``kind`` is one of ``equator``, ``sphere`` (``c=``), ``disc`` (``deformation=``), ``rp2``."""
    if kind == "equator":
        return equator(ring)
    if kind == "sphere":
        return sphere(ring, params.get("c"))
    if kind == "disc":
        return disc(ring, params.get("deformation"))
    if kind == "rp2":
        return rp2(ring)
    raise ValueError(f"unknown presentation kind {kind!r}")


@dataclass(frozen=True)
class GeometryConstants:
    """Constants of the Cartesian coordinates of a quantum sphere.

    At ``c = inf`` the fields ``lam_plus``/``lam_minus`` are +-inf and the
    products ``scaled_z_inf = (1 + sqrt c) z_inf`` and ``z_inf_lam_*`` hold
    their finite limits.
    """

    q: float
    c: float
    lam_plus: float
    lam_minus: float
    z_inf: float
    scaled_z_inf: float
    z_inf_lam_plus: float
    z_inf_lam_minus: float
    Q_h: float
    Q_z: float
    a0_tilde: float
    extras: dict = field(default_factory=dict, compare=False)

    def c_plus(self, k: int) -> float:
        return _c_pm(self.lam_plus, self.q, self.c, k)

    def c_minus(self, k: int) -> float:
        return _c_pm(self.lam_minus, self.q, self.c, k)


def _c_pm(lam: float, q: float, c: float, k: int) -> float:
    if math.isinf(c):
        raise ValueError("c_pm(k) is unbounded at c = inf")
    t = lam * q ** (2 * k)
    return t - t * t + c


def lambdas(c: float) -> tuple[float, float]:
    if math.isinf(c):
        return INF, -INF
    r = math.sqrt(c + 0.25)
    return 0.5 + r, 0.5 - r


def geometry_constants(p: SphereParams) -> GeometryConstants:
    q, c = p.q, p.c
    q2, q4 = q * q, q**4
    root = math.sqrt(2.0 * (1.0 + q4))
    lp, lm = lambdas(c)
    if p.is_equator:
        z_inf = 0.0
        scaled = -(1.0 + q2) / (2.0 * root)
        zlp = -(1.0 + q2) / (2.0 * root)
        zlm = (1.0 + q2) / (2.0 * root)
        a0 = 0.0
    else:
        z_inf = -1.0 / math.sqrt(8.0 * c * (1.0 + q4) / (1.0 + q2) ** 2 + 1.0)
        scaled = (1.0 + math.sqrt(c)) * z_inf
        zlp, zlm = z_inf * lp, z_inf * lm
        a0 = (1.0 + q2) / (2.0 * (1.0 + q4)) / (1.0 + math.sqrt(c))
    Q_h = -root / (1.0 + q2) * scaled
    Q_z = abs(-2.0 * (1.0 + q4) / (1.0 + q2) * scaled)
    return GeometryConstants(q, c, lp, lm, z_inf, scaled, zlp, zlm, Q_h, Q_z, a0)


def tilded_generators(p: SphereParams, ring=None) -> tuple[Element, Element]:
    """``(A~, B~)`` = generators scaled by ``1/(1 + sqrt c)``; at c = inf, ``(A, B)``."""
    ring = ring if ring is not None else FloatRing(p.q, p.c)
    if p.is_equator:
        pres = equator(ring)
        return pres.gen("A"), pres.gen("B")
    pres = sphere(ring, p.c)
    scale = 1 + ring.sqrt(ring.coerce(Fraction(str(p.c)) if ring.exact else p.c))
    inv = scale.inverse() if ring.exact else 1 / scale
    return pres.gen("Ac") * inv, pres.gen("Bc") * inv


def cartesian_coordinates(p: SphereParams, ring=None) -> tuple[Element, Element, Element]:
    """Self-adjoint ``x, y, z`` with ``x^2 + y^2 + z^2 = 1`` (float backend)."""
    ring = ring if ring is not None else FloatRing(p.q, p.c)
    if ring.exact:
        raise ValueError("Cartesian coordinates need the float backend")
    g = geometry_constants(p)
    At, Bt = tilded_generators(p, ring)
    Bts = Bt.star()
    q2, q4 = p.q**2, p.q**4
    K = math.sqrt(2.0 * (1.0 + q4)) / (1.0 + q2) * g.scaled_z_inf
    x = (Bt - Bts) * complex(0.0, -K)
    y = (Bt + Bts) * (-K)
    one = Element.scalar(1, ring, At.alphabet)
    z = At * (-2.0 * (1.0 + q4) / (1.0 + q2) * g.scaled_z_inf) + one * g.z_inf
    return x, y, z


def z_ladder(p: SphereParams, sign: int, kmax: int) -> list[float]:
    """Eigenvalues ``z_k`` of ``z`` in the plus (sign=+1) or minus (sign=-1) representation."""
    if kmax < 0:
        raise ValueError("kmax must be >= 0")
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    g = geometry_constants(p)
    q2, q4 = p.q**2, p.q**4
    zl = g.z_inf_lam_plus if sign > 0 else g.z_inf_lam_minus
    factor = 2.0 * (1.0 + q4) / (1.0 + q2)
    return [g.z_inf - zl * factor * p.q ** (2 * k) for k in range(kmax + 1)]
