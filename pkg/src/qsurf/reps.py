"""Truncated matrix representations.

Every infinite-dimensional generator acts as a weighted shift
``e_k -> w(k) e_{k-s}``.  Cutting to ``N`` basis vectors only loses the
components pushed past ``e_{N-1}``, so a word of total shift degree ``d``
is represented exactly on ``span{e_0, ..., e_{N-1-d}}`` -- the protected
subspace.  All residual checks compare columns in that range.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import gmpy2
import numpy as np

from .algebra import Element, Presentation
from .surfaces import AMPLITUDES, INF

__all__ = [
    "Rep",
    "KINDS",
    "build_rep",
    "represent",
    "word_matrix",
    "protected_columns",
    "relation_residual",
    "relation_residuals",
    "spectrum",
    "combine",
    "shift_matrix",
    "shift_forms",
    "precise_residual",
]

KINDS = (
    "sphere_plus",
    "sphere_minus",
    "sphere_theta",
    "disc_infinite",
    "disc_theta",
    "rp2_infinite",
    "rp2_theta",
)


@dataclass(frozen=True, eq=False)
class Rep:
    """Generator -> matrix assignment with truncation bookkeeping.

    ``blocks`` lists ``(size, truncated)`` for the diagonal blocks; the
    protected subspace of a truncated block of size ``n`` for a degree-``d``
    word is its first ``n - d`` basis vectors.  ``column_map`` records a
    monomial change of basis applied after the blocks were assembled.
    """

    kind: str
    params: dict
    matrices: dict
    blocks: tuple
    amplitudes: dict = field(default_factory=lambda: dict(AMPLITUDES))
    column_map: np.ndarray | None = None
    meta: dict = field(default_factory=dict)

    @property
    def dim(self) -> int:
        return sum(n for n, _ in self.blocks)

    @property
    def letters(self) -> tuple:
        return tuple(self.matrices)

    def __getitem__(self, letter: str) -> np.ndarray:
        return self.matrices[letter]

    def protected(self, degree: int) -> np.ndarray:
        cols = []
        start = 0
        for n, truncated in self.blocks:
            keep = max(n - degree, 0) if truncated else n
            cols.extend(range(start, start + keep))
            start += n
        cols = np.asarray(cols, dtype=int)
        if self.column_map is not None:
            cols = np.sort(self.column_map[cols])
        return cols


def shift_matrix(weights, shift: int, n: int) -> np.ndarray:
    """Matrix of ``e_k -> weights[k] e_{k-shift}`` cut to ``n`` basis vectors."""
    m = np.zeros((n, n), dtype=complex)
    for k in range(n):
        j = k - shift
        if 0 <= j < n:
            m[j, k] = weights[k]
    return m


def _with_adjoints(mats: dict) -> dict:
    out = {}
    for name, m in mats.items():
        out[name] = m
        if not name.endswith("*") and name + "*" not in mats and name not in ("A", "Ac", "P"):
            out[name + "*"] = m.conj().T
    return out


def _sqrt(x: float) -> float:
    # c_pm(k) and 1 - q^(4k) are >= 0 in exact arithmetic; clip rounding noise.
    return math.sqrt(x) if x > 0 else 0.0


def shift_forms(kind: str, q, N: int, c=INF, deformation=None, sqrt=_sqrt) -> dict:
    """Weighted-shift data ``letter -> (shift, weights)`` of an infinite kind.

    ``weights[k]`` is the coefficient of ``e_{k - shift}`` in the image of
    ``e_k``; starred letters use the adjoint weights.  ``q``, ``c`` and
    ``sqrt`` may come from any real number type, which lets the same
    formulas drive the float matrices and the high-precision oracle.
    """
    one = q / q
    zero = one - one
    if kind in ("sphere_plus", "sphere_minus"):
        sign = 1 if kind == "sphere_plus" else -1
        if math.isinf(float(c)):
            diag = [sign * q ** (2 * k) for k in range(N)]
            down = [sqrt(one - q ** (4 * k)) for k in range(N + 1)]
            names = ("A", "B")
        else:
            lam = one / 2 + sign * sqrt(c + one / 4)
            diag = [lam * q ** (2 * k) for k in range(N)]
            # c_pm(0) vanishes exactly; keep it out of the rounding
            down = [zero] + [sqrt(lam * q ** (2 * k) - (lam * q ** (2 * k)) ** 2 + c)
                             for k in range(1, N + 1)]
            names = ("Ac", "Bc")
        return {names[0]: (0, diag), names[1]: (1, down[:N]), names[1] + "*": (-1, down[1:])}
    if kind == "disc_infinite":
        s = q if deformation is None else deformation
        up = [sqrt(one - s ** (k + 1)) for k in range(N)]
        down = [zero] + up[:-1]
        return {"x": (-1, up), "x*": (1, down)}
    if kind == "rp2_infinite":
        def tw(k):
            return q ** (2 * (k - 1)) * sqrt(one - q ** (4 * k)) if k >= 1 else zero

        def rw(k):
            return sqrt(one - q ** (4 * k)) * sqrt(one - q ** (4 * (k - 1))) if k >= 2 else zero

        return {
            "P": (0, [q ** (4 * k) for k in range(N)]),
            # k >= 1 branch of the T weights; see the identity rho = pi_+ o iota.
            "T": (1, [tw(k) for k in range(N)]),
            "T*": (-1, [tw(k + 1) for k in range(N)]),
            "R": (2, [rw(k) for k in range(N)]),
            "R*": (-2, [rw(k + 2) for k in range(N)]),
        }
    raise ValueError(f"{kind!r} is not an infinite-dimensional kind")


def _matrices_from_forms(forms: dict, N: int) -> dict:
    return {name: shift_matrix([complex(w) for w in weights], shift, N)
            for name, (shift, weights) in forms.items()}


def build_rep(kind: str, q: float, N: int = 64, c: float = INF, theta: float = 0.0,
              deformation: float | None = None) -> Rep:
    """Build one of the irreducible representations listed in :data:`KINDS`.

    ``c`` selects the sphere (``inf`` = equator, generators ``A, B``; finite
    ``c`` uses ``Ac, Bc``).  ``deformation`` is the disc parameter (default
    ``q``); coefficients are still evaluated at ``q``.
    """
    if not 0.0 < q < 1.0:
        raise ValueError("q must lie in (0, 1)")
    if kind not in KINDS:
        raise ValueError(f"unknown representation kind {kind!r}")
    if c < 0:
        raise ValueError("c must be >= 0")
    theta_kind = kind.endswith("_theta")
    if not theta_kind and N < 4:
        raise ValueError("infinite kinds need N >= 4")
    if theta_kind and not 0.0 <= theta < 2 * math.pi:
        raise ValueError("theta must lie in [0, 2 pi)")
    params = {"q": q, "c": c, "theta": theta if theta_kind else None}
    if kind.startswith("disc"):
        params["deformation"] = q if deformation is None else deformation
    meta = {}
    phase = cmath.exp(1j * theta)

    if not theta_kind:
        forms = shift_forms(kind, q, N, c, deformation)
        mats = _matrices_from_forms(forms, N)
        if kind.startswith("sphere") and c == 0:
            meta["faithful" if kind == "sphere_plus" else "trivial"] = True
        meta["forms"] = ((kind, N, c, deformation),)
        return Rep(kind, params, mats, ((N, True),), meta=meta)

    if kind == "sphere_theta":
        if math.isinf(c):
            mats = {"A": np.zeros((1, 1), complex), "B": np.array([[phase]])}
        else:
            mats = {"Ac": np.zeros((1, 1), complex), "Bc": np.array([[math.sqrt(c) * phase]])}
            if c == 0:
                meta["theta_independent"] = True
    elif kind == "disc_theta":
        mats = {"x": np.array([[phase]])}
    else:
        mats = {"P": np.zeros((1, 1), complex), "T": np.zeros((1, 1), complex),
                "R": np.array([[phase]])}
    return Rep(kind, params, _with_adjoints(mats), ((1, False),), meta=meta)


def word_matrix(word, r: Rep) -> np.ndarray:
    m = np.eye(r.dim, dtype=complex)
    for letter in word:
        try:
            m = m @ r.matrices[letter]
        except KeyError:
            raise KeyError(f"generator {letter!r} is not represented in {r.kind}") from None
    return m


def element_degree(a: Element, r: Rep) -> int:
    return max((sum(r.amplitudes.get(x, 0) for x in w) for w in a.terms), default=0)


def represent(a: Element, r: Rep) -> np.ndarray:
    """Matrix of ``a``; exact on the protected subspace of its degree."""
    q, c = r.params["q"], r.params.get("c")
    cval = None if c is None or math.isinf(c) else c
    out = np.zeros((r.dim, r.dim), dtype=complex)
    for w, coef in a.terms.items():
        out += a.ring.evaluate(coef, q, cval) * word_matrix(w, r)
    return out


def protected_columns(r: Rep, *elements: Element) -> np.ndarray:
    d = max((element_degree(a, r) for a in elements), default=0)
    return r.protected(d)


def relation_residuals(p: Presentation, r: Rep) -> dict:
    out = {}
    for label, lhs, rhs in p.relations:
        diff = lhs - rhs
        cols = protected_columns(r, lhs, rhs)
        m = represent(diff, r)[:, cols]
        out[label] = float(np.linalg.norm(m, 2)) if m.size else 0.0
    return out


def relation_residual(p: Presentation, r: Rep) -> float:
    """Largest operator norm of a defining relation on its protected subspace."""
    return max(relation_residuals(p, r).values(), default=0.0)


def spectrum(m: np.ndarray, tol: float = 1e-12) -> np.ndarray:
    """Ascending eigenvalues of a hermitian matrix."""
    m = np.asarray(m)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError("spectrum needs a square matrix")
    if np.max(np.abs(m - m.conj().T), initial=0.0) > tol:
        raise ValueError("matrix is not hermitian")
    return np.linalg.eigvalsh(m)


def _monomial_permutation(u: np.ndarray, tol: float) -> np.ndarray | None:
    mask = np.abs(u) > tol
    if not (np.all(mask.sum(axis=0) == 1) and np.all(mask.sum(axis=1) == 1)):
        return None
    return np.argmax(mask, axis=0)


def combine(r1: Rep, r2: Rep | None = None, mode: str = "direct_sum", U=None,
            tol: float = 1e-12) -> Rep:
    """``direct_sum`` of two reps, or ``conjugate_by`` a unitary ``U``."""
    if mode == "direct_sum":
        if r2 is None:
            raise ValueError("direct_sum needs two representations")
        if set(r1.matrices) != set(r2.matrices):
            raise ValueError("representations of different algebras")
        if r1.params["q"] != r2.params["q"]:
            raise ValueError("representations at different q")
        n1, n2 = r1.dim, r2.dim
        mats = {}
        for name, m1 in r1.matrices.items():
            m = np.zeros((n1 + n2, n1 + n2), dtype=complex)
            m[:n1, :n1] = m1
            m[n1:, n1:] = r2.matrices[name]
            mats[name] = m
        cmap = None
        if r1.column_map is not None or r2.column_map is not None:
            left = r1.column_map if r1.column_map is not None else np.arange(n1)
            right = r2.column_map if r2.column_map is not None else np.arange(n2)
            cmap = np.concatenate([left, right + n1])
        meta = {"parts": (r1.kind, r2.kind)}
        if "forms" in r1.meta and "forms" in r2.meta and cmap is None:
            meta["forms"] = r1.meta["forms"] + r2.meta["forms"]
        return Rep(f"{r1.kind}+{r2.kind}", dict(r1.params), mats, r1.blocks + r2.blocks,
                   dict(r1.amplitudes), cmap, meta)
    if mode == "conjugate_by":
        U = np.asarray(U, dtype=complex)
        if U.shape != (r1.dim, r1.dim):
            raise ValueError("dimension mismatch")
        if np.max(np.abs(U @ U.conj().T - np.eye(r1.dim))) > tol:
            raise ValueError("U is not unitary")
        perm = _monomial_permutation(U, tol)
        if perm is None:
            raise ValueError("only monomial unitaries keep the protected subspace meaningful")
        base = r1.column_map if r1.column_map is not None else np.arange(r1.dim)
        mats = {name: U @ m @ U.conj().T for name, m in r1.matrices.items()}
        meta = {k: v for k, v in r1.meta.items() if k != "forms"}
        return Rep(f"U({r1.kind})", dict(r1.params), mats, r1.blocks, dict(r1.amplitudes),
                   perm[base], meta)
    raise ValueError(f"unknown combine mode {mode!r}")


def _mp_coefficient(ring, coef, q, c):
    if not ring.exact:
        return gmpy2.mpc(complex(coef))
    total = gmpy2.mpc(0)
    for (a, b), (re, im) in coef.terms.items():
        if b and c is None:
            raise ValueError("element depends on c but no finite c was supplied")
        term = gmpy2.mpc(gmpy2.mpq(re.numerator, re.denominator),
                         gmpy2.mpq(im.numerator, im.denominator)) * q ** a
        if b:
            term *= c ** b
        total += term
    return total


def _precise_block(a: Element, entry, q: float, prec: int, amplitudes) -> float:
    kind, N, c, deformation = entry
    with gmpy2.context(gmpy2.get_context(), precision=prec):
        qm = gmpy2.mpfr(q)
        cm = None if math.isinf(c) else gmpy2.mpfr(c)
        dm = None if deformation is None else gmpy2.mpfr(deformation)
        forms = shift_forms(kind, qm, N, gmpy2.inf() if cm is None else cm, dm, sqrt=gmpy2.sqrt)
        tables = {name: (s, np.array(w + [gmpy2.mpfr(0)], dtype=object))
                  for name, (s, w) in forms.items()}
        degree = max((sum(amplitudes.get(x, 0) for x in w) for w in a.terms), default=0)
        cols = np.arange(max(N - degree, 0))
        if not cols.size:
            return 0.0
        acc = np.full((N, cols.size), gmpy2.mpc(0), dtype=object)
        for word, coef in a.terms.items():
            idx = cols.copy()
            vals = np.full(cols.size, _mp_coefficient(a.ring, coef, qm, cm), dtype=object)
            for letter in reversed(word):
                shift, weights = tables[letter]
                vals = vals * weights[idx]
                # a zero weight guards every step that would leave the range
                idx = np.clip(idx - shift, 0, N)
            inside = idx < N
            acc[idx[inside], cols[inside]] += vals[inside]
        return float(max(abs(x) for x in acc.ravel()))


def precise_residual(a: Element, r: Rep, prec: int = 256) -> float:
    """Largest entry of ``a`` on the protected columns, in ``prec``-bit arithmetic.

    Meant for differences such as ``word - normal_form(word)`` whose
    coefficients cancel far below double precision.  ``q`` and ``c`` are
    taken bit-for-bit from the float parameters of ``r``.  Only assemblies
    of infinite kinds (and their direct sums) carry the needed data.
    """
    entries = r.meta.get("forms")
    if entries is None:
        raise ValueError(f"{r.kind} has no weighted-shift description")
    return max(_precise_block(a, s, r.params["q"], prec, r.amplitudes) for s in entries)
