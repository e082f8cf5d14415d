"""Verification suites and their reports.

Each suite returns a list of :class:`Check` records; :func:`run_suite`
wraps them into a :class:`VerificationReport`.  Anchors are the formula
being checked, written in the expression grammar where possible.
"""

from __future__ import annotations

import json
import math
import os
from dataclasses import asdict, dataclass, field
from fractions import Fraction

import numpy as np

from . import __version__
from .algebra import (
    Element,
    StarHom,
    apply_hom,
    check_hom,
    compose_hom,
    identity_hom,
    normal_form,
    random_words,
)
from .ktheory import disc_defect, index_E, matrix_units, quasi_basis_check, rp2_defect
from .morphisms import (
    MatrixHom,
    PiecewiseFn,
    c_plus_collision,
    chi_c,
    delta_action,
    delta_g,
    eval_fn,
    faithful_context,
    fixed_point_project,
    functional_calculus,
    kappa,
    phi_disc,
    pi_theta_value,
    polar_decompose,
    reflection,
)
from .reps import (
    build_rep,
    combine,
    precise_residual,
    relation_residuals,
    represent,
    spectrum,
)
from .rings import EXACT, FloatRing, Laurent
from .surfaces import (
    INF,
    SphereParams,
    cartesian_coordinates,
    disc,
    equator,
    geometry_constants,
    rp2,
    sphere,
    z_ladder,
)

__all__ = [
    "SUITES",
    "C_GRID",
    "SuiteConfig",
    "Check",
    "VerificationReport",
    "run_suite",
    "emit",
    "iota",
    "random_element",
]

SUITES = ("relations", "bases-oracle", "geometry", "chi", "actions", "disc", "rp2-reps", "ktheory")
C_GRID = (0.0, 0.5, 1.0, 10.0, INF)
FINITE_C = (0.5, 1.0, 10.0)
THETAS = tuple(2 * math.pi * k / 8 + 0.1 for k in range(8))
ENV_PREFIX = "QSURF_"


def _parse_c(value) -> float:
    if isinstance(value, str) and value.strip().lower() in ("inf", "infinity", "oo"):
        return INF
    return float(value)


@dataclass(frozen=True)
class SuiteConfig:
    q: float = 0.5
    c: float = INF
    dim: int = 64
    tol: float = 1e-10
    seed: int = 42
    suite: str = "all"

    def __post_init__(self):
        if not 0.0 < self.q < 1.0:
            raise ValueError("q must lie in (0, 1)")
        if not (self.c >= 0):
            raise ValueError("c must be >= 0 or inf")
        if self.dim < 4:
            raise ValueError("dim must be >= 4")
        if not self.tol > 0:
            raise ValueError("tol must be positive")
        if self.suite not in SUITES + ("all",):
            raise ValueError(f"unknown suite {self.suite!r}")

    @classmethod
    def from_sources(cls, flags: dict | None = None, env=None) -> "SuiteConfig":
        """Flags override ``QSURF_*`` environment variables, which override defaults."""
        env = os.environ if env is None else env
        conv = {"q": float, "c": _parse_c, "dim": int, "tol": float, "seed": int, "suite": str}
        values = {}
        for key, fn in conv.items():
            raw = env.get(ENV_PREFIX + key.upper())
            if raw is not None:
                try:
                    values[key] = fn(raw)
                except ValueError:
                    raise ValueError(f"bad value for {ENV_PREFIX + key.upper()}: {raw!r}") from None
        for key, val in (flags or {}).items():
            if val is not None:
                values[key] = conv[key](val)
        return cls(**values)

    def as_dict(self) -> dict:
        d = asdict(self)
        d["c"] = "inf" if math.isinf(self.c) else self.c
        return d


@dataclass
class Check:
    id: str
    anchor: str
    kind: str
    value: object
    threshold: object
    passed: bool

    def as_dict(self) -> dict:
        return {
            "id": self.id,
            "anchor": self.anchor,
            "kind": self.kind,
            "value": _jsonable(self.value),
            "threshold": _jsonable(self.threshold),
            "pass": bool(self.passed),
        }


def _jsonable(x):
    if isinstance(x, (np.floating, float)):
        x = float(x)
        return x if math.isfinite(x) else ("inf" if x > 0 else "-inf" if x < 0 else "nan")
    if isinstance(x, (np.integer,)):
        return int(x)
    if isinstance(x, (list, tuple, np.ndarray)):
        return [_jsonable(v) for v in x]
    if isinstance(x, (bool, int, str)) or x is None:
        return x
    return str(x)


def residual(id, anchor, value, threshold) -> Check:
    value = float(value)
    return Check(id, anchor, "residual", value, threshold, bool(value <= threshold))


def exact(id, anchor, value) -> Check:
    value = float(value)
    return Check(id, anchor, "exact", value, 0.0, value == 0.0)


def equal(id, anchor, value, expected, kind="rank") -> Check:
    return Check(id, anchor, kind, value, expected, value == expected)


@dataclass
class VerificationReport:
    version: str
    config: dict
    checks: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def failures(self) -> list:
        return [c for c in self.checks if not c.passed]

    def as_dict(self) -> dict:
        return {
            "version": self.version,
            "config": self.config,
            "checks": [c.as_dict() for c in self.checks],
            "pass": self.passed,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "VerificationReport":
        checks = [Check(c["id"], c["anchor"], c["kind"], c["value"], c["threshold"], c["pass"])
                  for c in d["checks"]]
        return cls(d["version"], d["config"], checks)


def _max_abs(m) -> float:
    m = np.asarray(m)
    return float(np.max(np.abs(m), initial=0.0))


def _fmt_c(c: float) -> str:
    return "inf" if math.isinf(c) else f"{c:g}"


def random_element(rng, p, letters, max_len: int, nterms: int = 3) -> Element:
    """Random combination of words with small integer coefficients times powers of q."""
    ring = p.ring
    out = p.scalar(0)
    for w in random_words(rng, letters, nterms, max_len, min_len=0):
        coef = int(rng.integers(-3, 4)) or 1
        k = int(rng.integers(-2, 3))
        scale = ring.q**k if ring.exact else ring.qval**k
        out = out + p.word(w) * (ring.coerce(coef) * scale)
    return out


def iota(ring=EXACT) -> StarHom:
    """``P -> A^2``, ``R -> B^2``, ``T -> AB``."""
    src, tgt = rp2(ring), equator(ring)
    A, B = tgt.gen("A"), tgt.gen("B")
    return StarHom("iota", src, tgt, {"P": A * A, "R": B * B, "T": A * B})


# -- suites -------------------------------------------------------------------

def _exact_presentations():
    out = [("equator", equator(EXACT)), ("sphere[c]", sphere(EXACT))]
    for c in C_GRID[:-1]:
        out.append((f"sphere[{_fmt_c(c)}]", sphere(EXACT, Fraction(str(c)))))
    out += [("disc[q]", disc(EXACT)), ("disc[q^4]", disc(EXACT, EXACT.q**4)), ("rp2", rp2(EXACT))]
    return out


def _sphere_exact(c: float):
    return equator(EXACT) if math.isinf(c) else sphere(EXACT, Fraction(str(c)))


def _infinite_reps(q: float, N: int, cfg_c: float):
    for c in sorted(set(C_GRID) | {cfg_c}):
        yield f"sphere[{_fmt_c(c)}]", _sphere_exact(c), faithful_context(q, N, c)
    yield "disc", disc(EXACT), build_rep("disc_infinite", q, N)
    yield "rp2", rp2(EXACT), build_rep("rp2_infinite", q, N)


def _theta_reps(q: float, cfg_c: float):
    for theta in THETAS[:3]:
        for c in sorted(set(C_GRID) | {cfg_c}):
            yield f"sphere[{_fmt_c(c)}]", _sphere_exact(c), build_rep("sphere_theta", q, 1, c, theta)
        yield "disc", disc(EXACT), build_rep("disc_theta", q, 1, theta=theta)
        yield "rp2", rp2(EXACT), build_rep("rp2_theta", q, 1, theta=theta)


def suite_relations(cfg: SuiteConfig) -> list:
    checks = []
    for name, p in _exact_presentations():
        for label, lhs, rhs in p.relations:
            value = normal_form(lhs - rhs, p).max_coefficient()
            checks.append(exact(f"relations.exact.{name}.{label}", label, value))
    for name, p, r in _infinite_reps(cfg.q, cfg.dim, cfg.c):
        worst = max(relation_residuals(p, r).values())
        checks.append(residual(f"relations.rep.{name}.{r.kind}", f"all relations of {name} in {r.kind}",
                               worst, cfg.tol))
    worst = {}
    for name, p, r in _theta_reps(cfg.q, cfg.c):
        worst[name] = max(worst.get(name, 0.0), max(relation_residuals(p, r).values()))
    for name, value in sorted(worst.items()):
        checks.append(residual(f"relations.theta.{name}", f"all relations of {name} in pi_theta",
                               value, 1e-12))
    return checks


def suite_bases_oracle(cfg: SuiteConfig, count: int = 500) -> list:
    rng = np.random.default_rng(cfg.seed)
    checks = []
    cases = [
        ("equator", equator(EXACT), ("A", "B", "B*"), 8,
         combine(build_rep("sphere_plus", cfg.q, cfg.dim), build_rep("sphere_minus", cfg.q, cfg.dim))),
        ("rp2", rp2(EXACT), ("P", "R", "R*", "T", "T*"), 6, build_rep("rp2_infinite", cfg.q, cfg.dim)),
    ]
    for name, p, letters, max_len, r in cases:
        words = random_words(rng, letters, count, max_len)
        worst, outside = 0.0, 0
        for w in words:
            a = p.word(w)
            nf = normal_form(a, p)
            outside += sum(not p.basis(x) for x in nf.terms)
            worst = max(worst, precise_residual(a - nf, r))
        checks.append(residual(f"bases-oracle.{name}.matrix", f"pi(w) = pi(nf(w)), {count} words",
                               worst, cfg.tol))
        checks.append(equal(f"bases-oracle.{name}.basis", "nf(w) uses basis words only", outside, 0,
                            kind="count"))
    return checks


def suite_geometry(cfg: SuiteConfig) -> list:
    q, c, N = cfg.q, cfg.c, cfg.dim
    sp = SphereParams(q, c)
    ring = FloatRing(q, c)
    pres = sphere(ring, c)
    g = geometry_constants(sp)
    x, y, z = cartesian_coordinates(sp, ring)
    tag = f"q={q:g},c={_fmt_c(c)}"
    checks = []
    ident = normal_form(x * x + y * y + z * z - pres.one(), pres).max_coefficient()
    checks.append(residual(f"geometry.identity[{tag}]", "x^2 + y^2 + z^2 = 1", ident, 1e-12))
    sa = max(normal_form(v - v.star(), pres).max_coefficient() for v in (x, y, z))
    checks.append(residual(f"geometry.selfadjoint[{tag}]", "x' = x, y' = y, z' = z", sa, 1e-12))

    circle, height, coords = 0.0, 0.0, 0.0
    for theta in THETAS:
        r = build_rep("sphere_theta", q, 1, c, theta)
        vx, vy, vz = (complex(represent(v, r)[0, 0]) for v in (x, y, z))
        circle = max(circle, abs(vx * vx + vy * vy + vz * vz - 1), abs(vx.imag), abs(vy.imag))
        height = max(height, abs(vz - g.z_inf))
        if math.isinf(c):
            coords = max(coords, abs(vx + math.sin(theta)), abs(vy - math.cos(theta)))
    checks.append(residual(f"geometry.theta.circle[{tag}]", "pi_theta(x^2 + y^2 + z^2) = 1",
                           circle, 1e-12))
    checks.append(residual(f"geometry.theta.height[{tag}]", "pi_theta(z) = z_inf", height, 1e-12))
    if math.isinf(c):
        checks.append(residual(f"geometry.theta.coords[{tag}]",
                               "pi_theta(x) = -sin(theta), pi_theta(y) = cos(theta)", coords, 1e-12))

    for sign, kind in ((1, "sphere_plus"), (-1, "sphere_minus")):
        r = build_rep(kind, q, N, c)
        diag = np.diag(represent(z, r)).real
        ladder = np.array(z_ladder(sp, sign, N - 1))
        checks.append(residual(f"geometry.ladder.diag[{kind},{tag}]", "pi(z) e_k = z_k e_k",
                               _max_abs(diag - ladder), cfg.tol))
        tail = abs(z_ladder(sp, sign, 40)[-1] - g.z_inf)
        checks.append(residual(f"geometry.ladder.limit[{kind},{tag}]", "z_40 -> z_inf", tail, 1e-8))
        if c > 0:
            gap = max(-(sign * (zk - g.z_inf)) for zk in ladder)
            checks.append(residual(f"geometry.ladder.interlace[{kind},{tag}]",
                                   "z_k^- <= z_inf <= z_k^+", max(gap, 0.0), 0.0))
    return checks


def _finite_cs(cfg: SuiteConfig) -> list:
    cs = list(FINITE_C)
    if 0 < cfg.c < INF and cfg.c not in cs:
        cs.append(cfg.c)
    return cs


def suite_chi(cfg: SuiteConfig) -> list:
    q, N = cfg.q, cfg.dim
    checks = []
    for c in _finite_cs(cfg):
        ch = chi_c(q, c, N)
        ctx = faithful_context(q, N, c)
        tag = f"c={c:g}"
        checks.append(residual(f"chi.F[{tag}]", "F_c(pi(A)) = pi^c(Ac)", _max_abs(ch["Ac"] - ctx["Ac"]), 1e-12))
        checks.append(residual(f"chi.G[{tag}]", "G_c(pi(A)) pi(B) = pi^c(Bc)",
                               _max_abs(ch["Bc"] - ctx["Bc"]), 1e-12))
        checks.append(residual(f"chi.hom[{tag}]", "chi_c respects the relations of the c-sphere",
                               max(ch.residuals().values()), cfg.tol))
        lp, lm = geometry_constants(SphereParams(q, c)).lam_plus, geometry_constants(SphereParams(q, c)).lam_minus
        expected = np.sort([lp * q ** (2 * k) for k in range(N)] + [lm * q ** (2 * k) for k in range(N)])
        checks.append(residual(f"chi.spectrum[{tag}]", "Sp(chi_c(Ac)) = {lambda_pm q^(2k)}",
                               _max_abs(spectrum(ch["Ac"]) - expected), cfg.tol))
        G = PiecewiseFn("G_c", q, c)
        g = geometry_constants(SphereParams(q, c))
        worst = max(abs(eval_fn(G, s * q ** (2 * k))
                        - math.sqrt((g.c_plus if s > 0 else g.c_minus)(k + 1)) / math.sqrt(1 - q ** (4 * k + 4)))
                    for k in range(20) for s in (1, -1))
        checks.append(residual(f"chi.G_values[{tag}]", "G_c(+-q^(2k)) = c_pm(k+1)^(1/2) / (1 - q^(4k+4))^(1/2)",
                               worst, 1e-12))
    return checks


_GS = tuple(complex(math.cos(2 * math.pi * k / 8 + 0.3), math.sin(2 * math.pi * k / 8 + 0.3))
            for k in range(8))
_EXACT_GS = (
    Laurent.gaussian(0, 1),
    Laurent.const(-1),
    Laurent.gaussian(Fraction(3, 5), Fraction(4, 5)),
    Laurent.gaussian(Fraction(-7, 25), Fraction(24, 25)),
)


def _images_equal(h1: StarHom, h2: StarHom) -> float:
    p = h1.target
    return max(normal_form(h1.image(g) - h2.image(g), p).max_coefficient()
               for g in h1.source.alphabet.letters)


def suite_actions(cfg: SuiteConfig) -> list:
    q, N = cfg.q, cfg.dim
    checks = []
    eq_ctx = faithful_context(q, N)
    r2bar = reflection("r2_bar", N=N)
    feq = equator(FloatRing(q))
    worst_r2 = 0.0
    for g in _GS:
        d = delta_action(g, N)
        dg = delta_g(g, feq)
        for letter in ("A", "B"):
            lhs = d(r2bar(eq_ctx[letter]))
            rhs = r2bar(represent(dg.image(letter), eq_ctx))
            worst_r2 = max(worst_r2, _max_abs(lhs - rhs))
    checks.append(residual("actions.delta_r2bar", "delta_g o r2bar = r2bar o delta_g", worst_r2, cfg.tol))
    r1bar = reflection("r1_bar", N=N)
    checks.append(residual("actions.involution.r1bar", "r1bar^2 = id",
                           _max_abs(r1bar.unitary @ r1bar.unitary - np.eye(2 * N)), cfg.tol))
    checks.append(residual("actions.involution.r2bar", "r2bar^2 = id",
                           max(_max_abs(r2bar(r2bar(eq_ctx[x])) - eq_ctx[x]) for x in ("A", "B")), cfg.tol))
    checks.append(residual("actions.r2bar_on_generators", "r2bar(A) = -A, r2bar(B) = -B",
                           max(_max_abs(r2bar(eq_ctx[x]) + eq_ctx[x]) for x in ("A", "B")), cfg.tol))

    r1, r2 = reflection("r1_symbolic"), reflection("r2_symbolic")
    ex = equator(EXACT)
    checks.append(exact("actions.involution.r1", "r1 o r1 = id", _images_equal(compose_hom(r1, r1), identity_hom(ex))))
    checks.append(exact("actions.involution.r2", "r2 o r2 = id", _images_equal(compose_hom(r2, r2), identity_hom(ex))))
    worst = 0.0
    for g in _EXACT_GS:
        for h in _EXACT_GS:
            lhs = compose_hom(delta_g(g, ex), delta_g(h, ex))
            worst = max(worst, _images_equal(lhs, delta_g(g * h, ex)))
        dg = delta_g(g, ex)
        worst = max(worst, _images_equal(compose_hom(dg, r2), compose_hom(r2, dg)))
    checks.append(exact("actions.delta.group_law", "delta_g o delta_h = delta_gh, delta_g o r2 = r2 o delta_g",
                        worst))

    A, B = ex.gen("A"), ex.gen("B")
    proj = [
        (r1, A, ex.scalar(0), "project(r1, A) = 0"),
        (r1, A * A * B, A * A * B, "project(r1, A^2*B) = A^2*B"),
        (r2, A * B, A * B, "project(r2, A*B) = A*B"),
        (r2, A, ex.scalar(0), "project(r2, A) = 0"),
    ]
    worst = max(normal_form(fixed_point_project(h, a) - want, ex).max_coefficient() for h, a, want, _ in proj)
    checks.append(exact("actions.fixed_point.examples", "; ".join(x[3] for x in proj), worst))
    odd = 0
    for w in random_words(np.random.default_rng(cfg.seed), ("A", "B", "B*"), 60, 5):
        img = fixed_point_project(r1, ex.word(w))
        odd += sum(word.count("A") % 2 for word in img.terms)
    checks.append(equal("actions.fixed_point.even_A", "r1-invariants have even powers of A", odd, 0,
                        kind="count"))

    for c in _finite_cs(cfg):
        tag = f"c={c:g}"
        ch = chi_c(q, c, N)
        ctx = faithful_context(q, N, c)
        fs = sphere(FloatRing(q, c), c)
        r1c = reflection("r1_bar_c", c=c, N=N)
        w_chi, w_r1c = 0.0, 0.0
        chf = MatrixHom("chi", fs, ch.rep)
        for g in _GS:
            d = delta_action(g, N)
            dg = delta_g(g, fs)
            for letter in ("Ac", "Bc"):
                w_chi = max(w_chi, _max_abs(d(ch[letter]) - chf(dg.image(letter))))
                w_r1c = max(w_r1c, _max_abs(d(r1c(ctx[letter])) - r1c(represent(dg.image(letter), ctx))))
        checks.append(residual(f"actions.delta_chi[{tag}]", "delta_g o chi_c = chi_c o delta_g", w_chi, cfg.tol))
        checks.append(residual(f"actions.delta_r1c[{tag}]", "delta_g o r1bar^c = r1bar^c o delta_g",
                               w_r1c, cfg.tol))
        checks.append(residual(f"actions.involution.r1c[{tag}]", "r1bar^c o r1bar^c = id",
                               max(_max_abs(r1c(r1c(ctx[x])) - ctx[x]) for x in ("Ac", "Bc")), cfg.tol))
        fc = PiecewiseFn("f_c", q, c)
        checks.append(residual(f"actions.f_c[{tag}]", "r1bar^c(Ac) = f_c(Ac)",
                               _max_abs(r1c(ctx["Ac"]) - functional_calculus(fc, ctx["Ac"])), cfg.tol))
        pol = polar_decompose(ctx["Bc*"], max_nullity=2)
        prot = ctx.protected(1)
        gc = functional_calculus(PiecewiseFn("g_c", q, c), ctx["Ac"])
        checks.append(residual(f"actions.g_c[{tag}]", "r1bar^c(|Bc'|) = g_c(Ac)",
                               _max_abs((r1c(pol.Pos) - gc)[:, prot]), cfg.tol))
        checks.append(residual(f"actions.V_fixed[{tag}]", "r1bar^c(V_c) = V_c", _max_abs(r1c(pol.V) - pol.V),
                               cfg.tol))
        shift = np.zeros((2 * N, 2 * N))
        for b in (0, N):
            for k in range(N - 1):
                shift[b + k + 1, b + k] = 1.0
        gp = geometry_constants(SphereParams(q, c))
        pos_expected = np.array([math.sqrt(max(gp.c_plus(k + 1), 0)) for k in range(N)]
                                + [math.sqrt(max(gp.c_minus(k + 1), 0)) for k in range(N)])
        pos_err = _max_abs((np.diag(pol.Pos).real - pos_expected)[prot])
        checks.append(residual(f"actions.polar[{tag}]", "pi^c(V_c) e_k = e_(k+1), |Bc'| e_k = c_pm(k+1)^(1/2) e_k",
                               max(_max_abs((pol.V - shift)[:, prot]), pos_err), cfg.tol))
        F = PiecewiseFn("F_c", q, c)
        chain = max(abs(eval_fn(fc, eval_fn(F, s * q ** (2 * k))) - eval_fn(F, -s * q ** (2 * k)))
                    for k in range(40) for s in (1, -1))
        checks.append(residual(f"actions.consistency.f[{tag}]", "f_c(F_c(x)) = F_c(-x)", chain, cfg.tol))
        lhs = pol.V @ gc
        rhs = eq_ctx["B*"] @ functional_calculus(PiecewiseFn("G_c", q, c), -eq_ctx["A"])
        checks.append(residual(f"actions.consistency.g[{tag}]", "V_c g_c(Ac) = chi_c^-1(B' G_c(-A))",
                               _max_abs((lhs - rhs)[:, eq_ctx.protected(1)]), cfg.tol))
        qc = c_plus_collision(c, 1, 2)
        gq = geometry_constants(SphereParams(qc, c))
        checks.append(residual(f"actions.c_plus_collision[{tag}]", "c_+(1) = c_+(2) for some q in (0,1)",
                               abs(gq.c_plus(1) - gq.c_plus(2)) if 0 < qc < 1 else INF, cfg.tol))
    return checks


def suite_disc(cfg: SuiteConfig, count: int = 100) -> list:
    q, N = cfg.q, cfg.dim
    checks = []
    phi = phi_disc(EXACT)
    checks.append(exact("disc.phi.well_defined", "phi(x'x - q^4 x x' - (1 - q^4)) = 0",
                        check_hom(phi).max_residual))
    r1 = reflection("r1_symbolic")
    img = phi.image("x")
    checks.append(exact("disc.phi.invariant", "r1(phi(x)) = phi(x)",
                        normal_form(apply_hom(r1, img) - img, phi.target).max_coefficient()))
    plus = build_rep("sphere_plus", q, N)
    dq4 = build_rep("disc_infinite", q, N, deformation=q**4)
    err = max(_max_abs(represent(phi.image(x), plus) - dq4[x]) for x in ("x", "x*"))
    checks.append(residual("disc.phi.rep", "pi_+ o phi = disc rep at q^4", err, 1e-12))
    worst = max(relation_residuals(disc(EXACT), build_rep("disc_infinite", q, N)).values())
    checks.append(residual("disc.rep.relation", "x'x - q x x' = 1 - q in pi", worst, cfg.tol))

    rng = np.random.default_rng(cfg.seed)
    p = equator(EXACT)
    worst = 0.0
    for _ in range(count):
        n = int(rng.integers(1, 4))
        tensors = [(random_element(rng, p, ("A", "B", "B*"), 3), random_element(rng, p, ("A", "B", "B*"), 3))
                   for _ in range(n)]
        pair = kappa(tensors)
        for theta in THETAS[:4]:
            worst = max(worst, abs(pi_theta_value(pair.plus, q, theta) - pi_theta_value(pair.minus, q, theta)))
    checks.append(residual("disc.kappa.agree", f"pi_theta(kappa_+) = pi_theta(kappa_-), {count} lists",
                           worst, 1e-12))
    one = p.one()
    gap = min(abs(pi_theta_value(one, q, t) - pi_theta_value(-one, q, t)) for t in THETAS)
    checks.append(residual("disc.kappa.target", "target (1, -1) differs by 2 under pi_theta",
                           abs(gap - 2.0), 1e-12))
    return checks


def suite_rp2_reps(cfg: SuiteConfig) -> list:
    q, N = cfg.q, cfg.dim
    checks = []
    p = rp2(EXACT)
    rho = build_rep("rp2_infinite", q, N)
    checks.append(residual("rp2-reps.rho.relations", "all RP^2 relations in rho",
                           max(relation_residuals(p, rho).values()), cfg.tol))
    worst = max(max(relation_residuals(p, build_rep("rp2_theta", q, 1, theta=t)).values()) for t in THETAS)
    checks.append(residual("rp2-reps.theta.relations", "all RP^2 relations in rho_theta", worst, 1e-12))
    io = iota(EXACT)
    checks.append(exact("rp2-reps.iota.well_defined", "iota respects the RP^2 relations",
                        check_hom(io).max_residual))
    plus = build_rep("sphere_plus", q, N)
    minus = build_rep("sphere_minus", q, N)
    U = np.diag([(-1.0) ** k for k in range(N)])
    uminus = combine(minus, mode="conjugate_by", U=U)
    e_plus = max(_max_abs(represent(io.image(x), plus) - rho[x]) for x in rho.letters)
    e_minus = max(_max_abs(represent(io.image(x), uminus) - rho[x]) for x in rho.letters)
    checks.append(residual("rp2-reps.rho_plus", "rho = pi_+ o iota", e_plus, 1e-12))
    checks.append(residual("rp2-reps.rho_minus", "rho = U (pi_- o iota) U^-1", e_minus, 1e-12))
    sp = spectrum(rho["P"])
    expected = np.sort([q ** (4 * k) for k in range(N)])
    checks.append(residual("rp2-reps.spectrum", "Sp(rho(P)) = {q^(4k)}", _max_abs(sp - expected), cfg.tol))
    return checks


def suite_ktheory(cfg: SuiteConfig, count: int = 100) -> list:
    q = cfg.q
    checks = []
    for N in (16, 32, 64, 128):
        for name, fn, want in (("rp2", rp2_defect, 2), ("disc", disc_defect, 1)):
            wit = fn(q, N)
            try:
                rank = wit.rank
            except ValueError:
                rank = -1
            checks.append(equal(f"ktheory.{name}.rank[N={N}]", f"rank(1 - U'U) = {want}", rank, want))
            checks.append(residual(f"ktheory.{name}.trace[N={N}]", f"trace(1 - U'U) = {want}",
                                   abs(wit.trace - want), 1e-8))
            checks.append(residual(f"ktheory.{name}.projection[N={N}]", "D^2 = D",
                                   wit.projection_residual(), cfg.tol))
            checks.append(residual(f"ktheory.{name}.hermitian[N={N}]", "D' = D", wit.hermitian_residual(), 1e-12))
            checks.append(residual(f"ktheory.{name}.coisometry[N={N}]", "U U' = 1 on protected columns",
                                   wit.coisometry_residual(), cfg.tol))
    U = rp2_defect(q, cfg.dim).U
    shift2 = np.zeros_like(U)
    for k in range(2, cfg.dim):
        shift2[k - 2, k] = 1.0
    checks.append(residual("ktheory.rp2.double_shift", "U e_n = e_(n-2), U e_0 = U e_1 = 0",
                           _max_abs(U - shift2), cfg.tol))
    m = min(6, cfg.dim - 3)
    units = matrix_units(q, cfg.dim, m)
    checks.append(residual("ktheory.matrix_units", "E_ij E_kl = delta_jk E_il, E_ij' = E_ji",
                           units.residual(), cfg.tol))
    checks.append(equal("ktheory.matrix_units.span", "dim span{E_ij} = (m+1)^2", units.span_dimension(),
                        (m + 1) ** 2))
    checks.append(equal("ktheory.matrix_units.resolved", "eigenvalues of rho(P) resolved", units.resolved, True,
                        kind="flag"))
    p = equator(EXACT)
    idx = index_E()
    checks.append(exact("ktheory.jones.index", "1 + A^2 + B'B = 2", normal_form(idx - p.scalar(2), p).max_coefficient()))
    rng = np.random.default_rng(cfg.seed)
    bad = 0
    for _ in range(count):
        a = random_element(rng, p, ("A", "B", "B*"), 5, nterms=int(rng.integers(1, 5)))
        bad += not quasi_basis_check(a, "both")
    checks.append(equal("ktheory.jones.quasi_basis", f"a = sum E(a u_i) u_i' = sum u_i E(u_i' a), {count} elements",
                        bad, 0, kind="count"))
    return checks


_SUITE_FUNCS = {
    "relations": suite_relations,
    "bases-oracle": suite_bases_oracle,
    "geometry": suite_geometry,
    "chi": suite_chi,
    "actions": suite_actions,
    "disc": suite_disc,
    "rp2-reps": suite_rp2_reps,
    "ktheory": suite_ktheory,
}


def run_suite(cfg: SuiteConfig) -> VerificationReport:
    names = SUITES if cfg.suite == "all" else (cfg.suite,)
    report = VerificationReport(__version__, cfg.as_dict())
    for name in names:
        report.checks.extend(_SUITE_FUNCS[name](cfg))
    return report


def emit(report: VerificationReport, fmt: str = "json") -> bytes:
    if fmt == "json":
        return (json.dumps(report.as_dict(), sort_keys=True, indent=2, ensure_ascii=False) + "\n").encode("utf-8")
    if fmt != "text":
        raise ValueError(f"unknown format {fmt!r}")
    rows = [("id", "kind", "value", "threshold", "result")]
    for c in report.checks:
        rows.append((c.id, c.kind, _short(c.value), _short(c.threshold), "PASS" if c.passed else "FAIL"))
    widths = [max(len(r[i]) for r in rows) for i in range(5)]
    lines = ["  ".join(cell.ljust(w) for cell, w in zip(r, widths)).rstrip() for r in rows]
    cfg = ", ".join(f"{k}={v}" for k, v in sorted(report.config.items()))
    head = f"qsurf {report.version}  ({cfg})"
    tail = f"overall: {'PASS' if report.passed else 'FAIL'} ({len(report.failures())} failing of {len(report.checks)})"
    return ("\n".join([head, *lines, tail]) + "\n").encode("utf-8")


def _short(x) -> str:
    if isinstance(x, float):
        return f"{x:.3g}"
    if isinstance(x, (list, tuple)):
        return "[" + ", ".join(_short(v) for v in x) + "]"
    return str(x)
