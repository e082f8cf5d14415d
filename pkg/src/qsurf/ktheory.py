"""Numeric witnesses for the K-theory of quantum RP^2 and the quantum disc.

The index of the boundary map is read off from the defect ``I - U*U`` of a
coisometry lift ``U``: a projection whose rank is the index.  For RP^2 the
lift is ``rho(R) beta(rho(P))``, a plain double shift with defect rank 2;
for the disc it is the adjoint of the polar part of ``pi(x)``, a single
shift with defect rank 1.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .algebra import Element, normal_form
from .morphisms import PiecewiseFn, functional_calculus, polar_decompose
from .reps import build_rep
from .rings import EXACT
from .surfaces import equator

__all__ = [
    "DefectWitness",
    "rp2_defect",
    "disc_defect",
    "MatrixUnits",
    "matrix_units",
    "expectation_E",
    "quasi_basis",
    "quasi_basis_check",
    "index_E",
]

RANK_GUARD = 1e-8


@dataclass
class DefectWitness:
    """Coisometry ``U`` (``UU* = I`` on ``protected``) and its defect ``D = I - U*U``."""

    U: np.ndarray
    D: np.ndarray
    protected: np.ndarray

    @property
    def trace(self) -> float:
        return float(np.trace(self.D).real)

    @property
    def rank(self) -> int:
        t = self.trace
        r = round(t)
        if abs(t - r) >= RANK_GUARD:
            raise ValueError(f"defect trace {t!r} is not an integer")
        return int(r)

    def coisometry_residual(self) -> float:
        n = self.U.shape[0]
        d = self.U @ self.U.conj().T - np.eye(n)
        return float(np.max(np.abs(d[np.ix_(self.protected, self.protected)]), initial=0.0))

    def projection_residual(self) -> float:
        """``||D^2 - D||``."""
        return float(np.linalg.norm(self.D @ self.D - self.D, 2))

    def hermitian_residual(self) -> float:
        return float(np.max(np.abs(self.D - self.D.conj().T), initial=0.0))


def rp2_defect(q: float, N: int = 64) -> DefectWitness:
    """``U = rho(R) beta(rho(P))``; ``beta`` is set to 0 at the eigenvalues 1 and ``q^4``."""
    if N < 8:
        raise ValueError("rp2_defect needs N >= 8")
    rho = build_rep("rp2_infinite", q, N)
    beta = functional_calculus(PiecewiseFn("beta", q), rho["P"], outside=0.0)
    U = rho["R"] @ beta
    D = np.eye(N) - U.conj().T @ U
    return DefectWitness(U, D, np.arange(N - 2))


def disc_defect(q: float, N: int = 64) -> DefectWitness:
    """Adjoint of the polar part of ``pi(x)`` for the disc with deformation ``q^4``."""
    if N < 4:
        raise ValueError("disc_defect needs N >= 4")
    x = build_rep("disc_infinite", q, N, deformation=q**4)["x"]
    V = polar_decompose(x, max_nullity=1).V
    U = V.conj().T
    D = np.eye(N) - U.conj().T @ U
    return DefectWitness(U, D, np.arange(N - 1))


@dataclass
class MatrixUnits:
    """``units[i][j] = E_ij`` built inside the image of the ideal generated by ``P``."""

    units: list
    min_gap: float
    resolved: bool

    def __getitem__(self, ij):
        i, j = ij
        return self.units[i][j]

    def residual(self) -> float:
        """Largest entry of ``E_ij E_kl - delta_jk E_il`` and ``E_ij* - E_ji``."""
        n = len(self.units)
        worst = 0.0
        for i in range(n):
            for j in range(n):
                eij = self.units[i][j]
                worst = max(worst, float(np.max(np.abs(eij.conj().T - self.units[j][i]))))
                for k in range(n):
                    for l in range(n):
                        target = self.units[i][l] if j == k else 0.0
                        worst = max(worst, float(np.max(np.abs(eij @ self.units[k][l] - target))))
        return worst

    def span_dimension(self, tol: float = 1e-10) -> int:
        flat = np.array([e.ravel() for row in self.units for e in row])
        return int(np.linalg.matrix_rank(flat, tol=tol))


def matrix_units(q: float, N: int = 64, maxij: int = 4) -> MatrixUnits:
    """``E_ij`` for ``i, j <= maxij`` from spectral projections of ``rho(P)`` and powers of ``rho(T)``.

    ``E_ij`` is ``P_i T^(j-i) P_j`` (``T*`` for ``j < i``) divided by its only
    nonzero entry.
    """
    if not 0 <= maxij < N - 2:
        raise ValueError("need 0 <= maxij < N - 2")
    rho = build_rep("rp2_infinite", q, N)
    w, v = np.linalg.eigh(rho["P"])
    order = np.argsort(-w)
    w, v = w[order], v[:, order]
    gaps = -np.diff(w[: maxij + 2])
    min_gap = float(gaps.min())
    resolved = bool(min_gap > 1e3 * np.finfo(float).eps * max(abs(w[0]), 1.0))
    proj = [np.outer(v[:, k], v[:, k].conj()) for k in range(maxij + 1)]
    T, Ts = rho["T"], rho["T*"]
    units = []
    for i in range(maxij + 1):
        row = []
        for j in range(maxij + 1):
            step = T if j >= i else Ts
            m = proj[i] @ np.linalg.matrix_power(step, abs(j - i)) @ proj[j]
            idx = np.unravel_index(np.argmax(np.abs(m)), m.shape)
            row.append(m / m[idx])
        units.append(row)
    return MatrixUnits(units, min_gap, resolved)


def expectation_E(a: Element) -> Element:
    """Keep the basis monomials of even length (the ones fixed by the antipodal map)."""
    p = equator(a.ring)
    nf = normal_form(a, p)
    return Element(a.ring, a.alphabet, {w: c for w, c in nf.terms.items() if len(w) % 2 == 0})


def quasi_basis(ring=EXACT) -> tuple:
    p = equator(ring)
    return p.one(), p.gen("A"), p.gen("B").star()


def quasi_basis_check(a: Element, order: str = "both") -> bool:
    """Check ``a = sum E(a u_i) u_i*`` and/or ``a = sum u_i E(u_i* a)`` for ``u = (1, A, B*)``."""
    if order not in ("left", "right", "both"):
        raise ValueError("order must be 'left', 'right' or 'both'")
    p = equator(a.ring)
    u = quasi_basis(a.ring)
    target = normal_form(a, p)
    ok = True
    if order in ("left", "both"):
        s = sum((expectation_E(a * ui) * ui.star() for ui in u), p.scalar(0))
        ok = ok and normal_form(s - target, p).is_zero()
    if order in ("right", "both"):
        s = sum((ui * expectation_E(ui.star() * a) for ui in u), p.scalar(0))
        ok = ok and normal_form(s - target, p).is_zero()
    return ok


def index_E(ring=EXACT) -> Element:
    """``sum u_i u_i*`` in normal form."""
    p = equator(ring)
    return normal_form(sum((ui * ui.star() for ui in quasi_basis(ring)), p.scalar(0)), p)
