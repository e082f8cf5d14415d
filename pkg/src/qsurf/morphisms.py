"""Functional calculus, the sphere isomorphisms and the symmetry actions.

Polynomial maps (reflections, the U(1)-action, the disc embedding) are
:class:`~qsurf.algebra.StarHom` objects.  The isomorphisms between spheres
with different ``c`` are not polynomial, so they only exist as matrices in
the faithful context ``pi_+ (+) pi_-`` of the equator sphere (or its
finite-``c`` counterpart).  In those contexts every element is a pair of
operators, and both ``chi_c`` and ``chi_c^-1`` act as the identity on
pairs; the actions are conjugations by block-diagonal unitaries.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .algebra import Element, Presentation, StarHom, apply_hom, normal_form
from .reps import Rep, build_rep, combine, relation_residuals, represent
from .rings import EXACT, Laurent
from .surfaces import INF, disc, equator, lambdas, sphere

__all__ = [
    "FN_NAMES",
    "PiecewiseFn",
    "DomainError",
    "eval_fn",
    "functional_calculus",
    "faithful_context",
    "MatrixHom",
    "MatrixAction",
    "delta_action",
    "flip_action",
    "chi_c",
    "delta_g",
    "reflection",
    "fixed_point_project",
    "phi_disc",
    "PolarDecomposition",
    "polar_decompose",
    "Z2Pair",
    "kappa",
    "pi_theta_value",
    "c_plus_collision",
]

FN_NAMES = ("eta_c", "F_c", "G_c", "f_c", "g_c", "beta")

_DOMAIN_TOL = 1e-12


class DomainError(ValueError):
    """A piecewise function was evaluated outside its domain."""


@dataclass(frozen=True)
class PiecewiseFn:
    """Named real function with parameters ``q`` and ``c``.

    ``lam_plus``/``lam_minus`` default to the values determined by ``c``
    and may be overridden (useful for sanity checks such as the identity
    ``f_c`` with both set to 1).
    """

    name: str
    q: float
    c: float = INF
    lam_plus: float | None = None
    lam_minus: float | None = None

    def __post_init__(self):
        if self.name not in FN_NAMES:
            raise ValueError(f"unknown function {self.name!r}")
        if not 0.0 < self.q < 1.0:
            raise ValueError("q must lie in (0, 1)")
        overridden = self.lam_plus is not None and self.lam_minus is not None
        if self.name != "beta" and math.isinf(self.c) and not (self.name == "f_c" and overridden):
            raise ValueError(f"{self.name} needs a finite c")
        lp, lm = lambdas(self.c)
        if self.lam_plus is None:
            object.__setattr__(self, "lam_plus", lp)
        if self.lam_minus is None:
            object.__setattr__(self, "lam_minus", lm)
        if self.name in ("f_c", "g_c") and (self.lam_plus == 0 or self.lam_minus == 0):
            raise ValueError(f"{self.name} needs lambda_+ and lambda_- nonzero (c > 0)")

    def domain(self) -> tuple[float, float]:
        """Closed interval (or open bound for ``beta``) of admissible arguments."""
        if self.name == "eta_c":
            r = math.sqrt(self.c + 0.25)
            return 0.5 - r, 0.5 + r
        if self.name in ("F_c", "G_c"):
            return -1.0, 1.0
        if self.name in ("f_c", "g_c"):
            if self.lam_minus > 0:
                # overridden lambdas: symmetric interval covering both branches
                r = max(abs(self.lam_minus), abs(self.lam_plus))
                return -r, r
            return self.lam_minus, self.lam_plus
        q4 = self.q**4
        return -INF, (q4 + q4 * q4) / 2

    def in_domain(self, t: float) -> bool:
        lo, hi = self.domain()
        if self.name == "beta":
            return t < hi
        return lo - _DOMAIN_TOL <= t <= hi + _DOMAIN_TOL

    def __call__(self, t: float) -> float:
        return eval_fn(self, t)


def _eta(c: float, t: float) -> float:
    v = t - t * t + c
    if v < -_DOMAIN_TOL:
        raise DomainError(f"eta_c undefined at {t!r}")
    return math.sqrt(max(v, 0.0))


def eval_fn(f: PiecewiseFn, t: float) -> float:
    """Evaluate ``f`` at ``t``; the branch containing 0 is the ``t >= 0`` one."""
    t = float(t)
    if not f.in_domain(t):
        raise DomainError(f"{f.name}({t!r}) is outside the domain {f.domain()}")
    q, c, lp, lm = f.q, f.c, f.lam_plus, f.lam_minus
    q2, q4 = q * q, q**4
    if f.name == "eta_c":
        return _eta(c, t)
    if f.name == "F_c":
        return lp * t if t >= 0 else -lm * t
    if f.name == "G_c":
        scale = 1.0 / math.sqrt(1.0 - q4 * t * t)
        return scale * (_eta(c, q2 * lp * t) if t >= 0 else _eta(c, -q2 * lm * t))
    if f.name == "f_c":
        return (lm / lp) * t if t >= 0 else (lp / lm) * t
    if f.name == "g_c":
        return _eta(c, (lm / lp) * q2 * t) if t >= 0 else _eta(c, (lp / lm) * q2 * t)
    return 1.0 / math.sqrt((1.0 - t) * (1.0 - t / q4))


def functional_calculus(f: PiecewiseFn, m: np.ndarray, outside: float | None = None,
                        tol: float = 1e-12) -> np.ndarray:
    """``f(m)`` for hermitian ``m`` through its eigenvalues.

    Diagonal input is handled entrywise, so the result keeps the exact
    diagonal structure.  Eigenvalues outside the domain raise
    :class:`DomainError` unless ``outside`` supplies a fill value.
    """
    m = np.asarray(m, dtype=complex)
    if np.max(np.abs(m - m.conj().T), initial=0.0) > tol:
        raise ValueError("functional calculus needs a hermitian matrix")

    def apply(values):
        out = []
        for v in values:
            if f.in_domain(v):
                out.append(eval_fn(f, v))
            elif outside is not None:
                out.append(outside)
            else:
                raise DomainError(f"spectrum point {v!r} is outside the domain of {f.name}")
        return np.asarray(out, dtype=float)

    diag = np.diag(m).real
    if np.max(np.abs(m - np.diag(np.diag(m))), initial=0.0) <= tol:
        return np.diag(apply(diag)).astype(complex)
    w, v = np.linalg.eigh(m)
    return (v * apply(w)) @ v.conj().T


def faithful_context(q: float, N: int = 64, c: float = INF) -> Rep:
    """``pi_+ (+) pi_-`` (c = inf) or ``pi^c_+ (+) pi^c_-`` truncated to ``N`` per block."""
    return combine(build_rep("sphere_plus", q, N, c), build_rep("sphere_minus", q, N, c))


@dataclass(frozen=True, eq=False)
class MatrixHom:
    """Generator images given as matrices in a fixed representation context.

    ``rep`` holds the images under the source letters, so
    :func:`~qsurf.reps.represent` evaluates the homomorphism on any source
    element.
    """

    name: str
    source: Presentation
    rep: Rep

    def __getitem__(self, letter: str) -> np.ndarray:
        return self.rep.matrices[letter]

    def __call__(self, a: Element) -> np.ndarray:
        return represent(a, self.rep)

    def residuals(self) -> dict:
        """Operator norms of the source relations on the protected subspace."""
        return relation_residuals(self.source, self.rep)


@dataclass(frozen=True, eq=False)
class MatrixAction:
    """Automorphism of a context given by conjugation with a unitary."""

    name: str
    unitary: np.ndarray

    def __call__(self, m: np.ndarray) -> np.ndarray:
        u = self.unitary
        return u @ np.asarray(m) @ u.conj().T

    def compose(self, inner: "MatrixAction") -> "MatrixAction":
        """``self o inner``."""
        return MatrixAction(f"{self.name}o{inner.name}", self.unitary @ inner.unitary)

    def on_rep(self, r: Rep) -> Rep:
        return combine(r, mode="conjugate_by", U=self.unitary)

    def on_hom(self, h: MatrixHom) -> MatrixHom:
        return MatrixHom(f"{self.name}o{h.name}", h.source, self.on_rep(h.rep))


def _check_unimodular(g) -> complex:
    g = complex(g)
    if abs(abs(g) - 1.0) > 1e-12:
        raise ValueError(f"g = {g!r} is not on the unit circle")
    return g


def delta_action(g, N: int, blocks: int = 2) -> MatrixAction:
    """``delta_g`` on a context of ``blocks`` weighted-shift blocks of size ``N``.

    Conjugation by ``diag(g^(-2k))`` multiplies every lowering shift by ``g^2``
    and fixes diagonal operators.
    """
    g = _check_unimodular(g)
    w = np.array([g ** (-2 * k) for k in range(N)] * blocks)
    return MatrixAction(f"delta[{g:.6g}]", np.diag(w))


def flip_action(N: int) -> MatrixAction:
    """``tau``: exchange the two blocks of a ``2N`` context."""
    u = np.zeros((2 * N, 2 * N), dtype=complex)
    u[:N, N:] = np.eye(N)
    u[N:, :N] = np.eye(N)
    return MatrixAction("tau", u)


def chi_c(q: float, c: float, N: int = 64) -> MatrixHom:
    """``chi_c``: sphere with parameter ``c`` into the ``pi_+ (+) pi_-`` context.

    ``Ac -> F_c(A)`` and ``Bc -> G_c(A) B``.  At ``c = inf`` the identity
    of the equator sphere is returned.
    """
    ctx = faithful_context(q, N)
    if math.isinf(c):
        return MatrixHom("id", equator(), ctx)
    if c <= 0:
        raise ValueError("chi_c needs c in (0, inf)")
    A, B = ctx["A"], ctx["B"]
    Ac = functional_calculus(PiecewiseFn("F_c", q, c), A)
    Bc = functional_calculus(PiecewiseFn("G_c", q, c), A) @ B
    mats = {"Ac": Ac, "Bc": Bc, "Bc*": Bc.conj().T}
    params = dict(ctx.params, c=c)
    rep = Rep("chi_c", params, mats, ctx.blocks, dict(ctx.amplitudes), ctx.column_map,
              {"context": ctx.kind})
    return MatrixHom(f"chi_{c:g}", sphere(EXACT, c), rep)


def _gaussian(g) -> Laurent:
    if isinstance(g, Laurent):
        return g
    if isinstance(g, complex):
        return Laurent.gaussian(Fraction(str(g.real)), Fraction(str(g.imag)))
    return Laurent.const(g)


def delta_g(g, p: Presentation) -> StarHom:
    """``delta_g`` on a sphere presentation: ``A -> A``, ``B -> g^2 B``.

    Over the exact ring ``g`` must be a Gaussian rational of modulus one
    (e.g. ``1j`` or ``(3+4j)/5``); over a float ring any unit complex works.
    """
    if p.name not in ("equator", "sphere"):
        raise ValueError("delta_g acts on spheres")
    a_letter, b_letter = p.alphabet.generators
    if p.ring.exact:
        gl = _gaussian(g)
        if not gl.is_constant():
            raise ValueError("g must be a constant")
        if gl * gl.conjugate() != Laurent.const(1):
            raise ValueError(f"g = {gl} is not on the unit circle")
        g2 = gl * gl
    else:
        g2 = _check_unimodular(g) ** 2
    images = {a_letter: p.gen(a_letter), b_letter: p.gen(b_letter) * g2}
    return StarHom(f"delta[{g}]", p, p, images)


def reflection(kind: str, q: float | None = None, c: float = INF, N: int = 64, ring=EXACT):
    """The reflections of the equator sphere and their matrix extensions.

    ``r1_symbolic``/``r2_symbolic``: StarHoms (``A -> -A``, and ``B -> B``
    resp. ``B -> -B``).  ``r1_bar``/``r1_bar_c``: conjugation by the block
    flip on the ``N``-per-block context.  ``r2_bar``: ``r1_bar o delta_i``.
    """
    if kind in ("r1_symbolic", "r2_symbolic"):
        p = equator(ring)
        sign = 1 if kind == "r1_symbolic" else -1
        return StarHom(kind[:2], p, p, {"A": -p.gen("A"), "B": p.gen("B") * sign})
    if kind in ("r1_bar", "r1_bar_c"):
        if kind == "r1_bar_c" and c <= 0:
            raise ValueError("r1_bar_c needs c in (0, inf]")
        tau = flip_action(N)
        return MatrixAction("r1bar" if kind == "r1_bar" else f"r1bar_{c:g}", tau.unitary)
    if kind == "r2_bar":
        act = flip_action(N).compose(delta_action(1j, N))
        return MatrixAction("r2bar", act.unitary)
    raise ValueError(f"unknown reflection {kind!r}")


def fixed_point_project(action: StarHom, a: Element) -> Element:
    """``(a + action(a)) / 2`` for an involutive action."""
    p = action.source
    if action.target is not p and action.target.alphabet != p.alphabet:
        raise ValueError("the action must be an endomorphism")
    for g in p.alphabet.generators:
        back = apply_hom(action, action.image(g))
        if not normal_form(back - p.gen(g), p).is_zero():
            raise ValueError(f"{action.name} is not an involution")
    half = Fraction(1, 2) if p.ring.exact else 0.5
    return normal_form((a + apply_hom(action, a)) * p.ring.coerce(half), p)


def phi_disc(ring=EXACT) -> StarHom:
    """``x -> B*`` from the disc with deformation ``q^4`` into the equator sphere."""
    target = equator(ring)
    source = disc(ring, ring.q**4)
    return StarHom("phi", source, target, {"x": target.gen("B").star()})


@dataclass
class PolarDecomposition:
    V: np.ndarray
    Pos: np.ndarray
    nullity: int

    def residual(self, m: np.ndarray, cols=None) -> float:
        d = np.asarray(m) - self.V @ self.Pos
        if cols is not None:
            d = d[:, cols]
        return float(np.max(np.abs(d), initial=0.0))


def polar_decompose(m: np.ndarray, max_nullity: int | None = None,
                    tol: float = 1e-12) -> PolarDecomposition:
    """``m = V Pos`` with ``Pos = (m* m)^(1/2)`` and ``V`` zero on ``ker Pos``.

    A truncated weighted shift loses rank at its boundary columns;
    ``max_nullity`` bounds how much rank deficiency is tolerated.
    """
    m = np.asarray(m, dtype=complex)
    h = m.conj().T @ m
    h = (h + h.conj().T) / 2
    scale = max(float(np.max(np.abs(h), initial=0.0)), 1.0)
    if np.max(np.abs(h - np.diag(np.diag(h))), initial=0.0) <= tol * scale:
        w = np.diag(h).real.copy()
        v = np.eye(len(w), dtype=complex)
    else:
        w, v = np.linalg.eigh(h)
    w = np.where(w > 0, w, 0.0)
    kernel = w <= tol * scale
    nullity = int(kernel.sum())
    if max_nullity is not None and nullity > max_nullity:
        raise np.linalg.LinAlgError(f"rank deficiency {nullity} exceeds {max_nullity}")
    root = np.sqrt(w)
    inv = np.where(kernel, 0.0, 1.0 / np.where(kernel, 1.0, root))
    pos = (v * root) @ v.conj().T
    V = m @ ((v * inv) @ v.conj().T)
    return PolarDecomposition(V, pos, nullity)


@dataclass(frozen=True)
class Z2Pair:
    """Element of ``P(S^2) (x) P(Z_2)`` stored by its values at ``+1`` and ``-1``."""

    plus: Element
    minus: Element
    meta: dict = field(default_factory=dict, compare=False)


def kappa(tensors, ring=EXACT) -> Z2Pair:
    """``sum p_i (x) p_i'  ->  (sum p_i p_i', sum p_i r1(p_i'))``."""
    p = equator(ring)
    r1 = reflection("r1_symbolic", ring=ring)
    plus = p.scalar(0)
    minus = p.scalar(0)
    for a, b in tensors:
        plus = plus + a * b
        minus = minus + a * apply_hom(r1, b)
    return Z2Pair(normal_form(plus, p), normal_form(minus, p))


def pi_theta_value(a: Element, q: float, theta: float) -> complex:
    """Value of an equator element in the one-dimensional representation ``pi_theta``."""
    return complex(represent(a, build_rep("sphere_theta", q, 1, INF, theta))[0, 0])


def c_plus_collision(c: float, k1: int, k2: int) -> float:
    """A ``q`` in (0, 1) with ``c_+(k1) = c_+(k2)``, found by bisection.

    The collision equation reads ``q^(2 k1) + q^(2 k2) = 1 / lambda_+``.
    """
    if k1 == k2 or min(k1, k2) < 1 or not 0 < c < INF:
        raise ValueError("need distinct k1, k2 >= 1 and finite c > 0")
    target = 1.0 / lambdas(c)[0]

    def h(q):
        return q ** (2 * k1) + q ** (2 * k2) - target

    lo, hi = 0.0, 1.0
    for _ in range(200):
        mid = (lo + hi) / 2
        if h(mid) < 0:
            lo = mid
        else:
            hi = mid
    return (lo + hi) / 2
