"""Coefficient rings for *-polynomial elements.

Two backends share one small protocol (``coerce``, ``is_zero``, ``conj``,
``magnitude``, ``evaluate``, ``fmt``):

* :class:`ExactRing` -- Laurent polynomials in ``q`` that are ordinary
  polynomials in ``c``, with Gaussian-rational coefficients.  Arithmetic is
  exact.  ``q`` and ``c`` are real symbols, so conjugation only touches the
  rational coefficients.
* :class:`FloatRing` -- complex doubles with ``q`` and ``c`` fixed numerically.
"""

from __future__ import annotations

import math
from fractions import Fraction
from numbers import Rational

__all__ = ["Laurent", "ExactRing", "FloatRing", "EXACT"]

_ZERO = Fraction(0)
_ONE = Fraction(1)


def _frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, Rational)):
        return Fraction(x)
    if isinstance(x, float):
        if not math.isfinite(x):
            raise ValueError(f"cannot represent {x!r} exactly")
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"cannot convert {type(x).__name__} to a rational")


class Laurent:
    """Element of Q(i)[q, q^-1, c].

    Stored as a mapping ``(q_exponent, c_exponent) -> (re, im)`` with
    :class:`~fractions.Fraction` parts and no zero entries.
    """

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms=None):
        clean = {}
        if terms:
            for key, (re, im) in terms.items():
                if re or im:
                    clean[key] = (re, im)
        self._terms = clean
        self._hash = None

    # -- constructors -------------------------------------------------------
    @classmethod
    def const(cls, value) -> "Laurent":
        if isinstance(value, Laurent):
            return value
        if isinstance(value, complex):
            return cls({(0, 0): (_frac(value.real), _frac(value.imag))})
        return cls({(0, 0): (_frac(value), _ZERO)})

    @classmethod
    def gaussian(cls, re, im=0) -> "Laurent":
        return cls({(0, 0): (_frac(re), _frac(im))})

    @classmethod
    def monomial(cls, q_exp: int = 0, c_exp: int = 0, coef=1) -> "Laurent":
        if c_exp < 0:
            raise ValueError("c only appears with non-negative exponents")
        base = cls.const(coef)
        return cls({(q_exp + a, c_exp + b): v for (a, b), v in base._terms.items()})

    # -- introspection ------------------------------------------------------
    @property
    def terms(self) -> dict:
        return dict(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    def is_constant(self) -> bool:
        return all(k == (0, 0) for k in self._terms)

    def constant_value(self):
        """Return the value as Fraction / complex if constant, else raise."""
        if not self.is_constant():
            raise ValueError(f"{self} is not a constant")
        re, im = self._terms.get((0, 0), (_ZERO, _ZERO))
        return re if not im else complex(re, im)

    def c_degree(self) -> int:
        return max((b for _, b in self._terms), default=0)

    # -- arithmetic ---------------------------------------------------------
    @staticmethod
    def _lift(other):
        if isinstance(other, Laurent):
            return other
        if isinstance(other, (int, float, complex, Fraction, Rational)):
            return Laurent.const(other)
        return NotImplemented

    def __add__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        out = dict(self._terms)
        for k, (re, im) in other._terms.items():
            r0, i0 = out.get(k, (_ZERO, _ZERO))
            out[k] = (r0 + re, i0 + im)
        return Laurent(out)

    __radd__ = __add__

    def __neg__(self):
        return Laurent({k: (-re, -im) for k, (re, im) in self._terms.items()})

    def __sub__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def __mul__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        out = {}
        for (a1, b1), (r1, i1) in self._terms.items():
            for (a2, b2), (r2, i2) in other._terms.items():
                k = (a1 + a2, b1 + b2)
                r0, i0 = out.get(k, (_ZERO, _ZERO))
                out[k] = (r0 + r1 * r2 - i1 * i2, i0 + r1 * i2 + i1 * r2)
        return Laurent(out)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return other * self.inverse()

    def inverse(self) -> "Laurent":
        """Inverse of a unit: a single term ``z * q^k`` with no ``c``."""
        if len(self._terms) != 1:
            raise ZeroDivisionError(f"{self} is not a unit of Q(i)[q, 1/q, c]")
        ((a, b), (re, im)), = self._terms.items()
        if b:
            raise ZeroDivisionError(f"{self} is not a unit of Q(i)[q, 1/q, c]")
        norm = re * re + im * im
        return Laurent({(-a, 0): (re / norm, -im / norm)})

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inverse() ** (-n)
        result = Laurent.const(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def conjugate(self) -> "Laurent":
        return Laurent({k: (re, -im) for k, (re, im) in self._terms.items()})

    # -- comparison ---------------------------------------------------------
    def __eq__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    # -- numerics -----------------------------------------------------------
    def evaluate(self, q: float, c: float | None = None) -> complex:
        total = 0j
        for (a, b), (re, im) in self._terms.items():
            if b and (c is None or math.isinf(c)):
                raise ValueError("element depends on c but no finite c was supplied")
            term = complex(float(re), float(im)) * (q ** a)
            if b:
                term *= c ** b
            total += term
        return total

    def l1(self) -> float:
        return float(sum(abs(re) + abs(im) for re, im in self._terms.values()))

    # -- display ------------------------------------------------------------
    def __repr__(self):
        return f"Laurent({self})"

    def __str__(self):
        return format_laurent(self)


def _fmt_rational(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def _fmt_gaussian(re: Fraction, im: Fraction) -> tuple[str, bool]:
    """Return (text, needs_parens) for a Gaussian rational."""
    if not im:
        return _fmt_rational(re), False
    if not re:
        if im == 1:
            return "i", False
        if im == -1:
            return "-i", False
        return f"{_fmt_rational(im)}*i", False
    sign = "+" if im > 0 else "-"
    mag = abs(im)
    imag = "i" if mag == 1 else f"{_fmt_rational(mag)}*i"
    return f"({_fmt_rational(re)} {sign} {imag})", True


def format_laurent(x: Laurent) -> str:
    if x.is_zero():
        return "0"
    pieces = []
    for (a, b) in sorted(x._terms, key=lambda k: (k[1], k[0])):
        re, im = x._terms[(a, b)]
        symbols = []
        if a:
            symbols.append("q" if a == 1 else f"q^{a}")
        if b:
            symbols.append("c" if b == 1 else f"c^{b}")
        negative = not im and re < 0
        if negative:
            re = -re
        coef, _ = _fmt_gaussian(re, im)
        if symbols and coef == "1":
            body = "*".join(symbols)
        elif symbols and coef == "-i":
            body = "-" + "*".join(["i"] + symbols)
        else:
            body = "*".join([coef] + symbols)
        pieces.append(("-" if negative else "+", body))
    out = ("-" if pieces[0][0] == "-" else "") + pieces[0][1]
    for sign, body in pieces[1:]:
        out += f" {sign} {body}"
    return out


class ExactRing:
    """Exact backend: coefficients are :class:`Laurent` values."""

    exact = True

    def __eq__(self, other):
        return isinstance(other, ExactRing)

    def __hash__(self):
        return hash("ExactRing")

    def __repr__(self):
        return "ExactRing()"

    @property
    def zero(self) -> Laurent:
        return Laurent()

    @property
    def one(self) -> Laurent:
        return Laurent.const(1)

    @property
    def q(self) -> Laurent:
        return Laurent.monomial(1, 0)

    @property
    def c(self) -> Laurent:
        return Laurent.monomial(0, 1)

    def coerce(self, x) -> Laurent:
        if isinstance(x, Laurent):
            return x
        return Laurent.const(x)

    def is_zero(self, x, tol=None) -> bool:
        return x.is_zero()

    def conj(self, x: Laurent) -> Laurent:
        return x.conjugate()

    def magnitude(self, x: Laurent) -> float:
        return x.l1()

    def evaluate(self, x: Laurent, q: float, c: float | None = None) -> complex:
        return x.evaluate(q, c)

    def fmt(self, x: Laurent) -> tuple[str, bool]:
        """Text for a coefficient and whether it needs parentheses as a factor."""
        text = format_laurent(x)
        compound = len(x._terms) > 1 or text.startswith("(")
        return text, compound

    def sqrt(self, x):
        value = x.constant_value() if isinstance(x, Laurent) else x
        if isinstance(value, complex) or value < 0:
            raise ValueError("square root outside the exact ring")
        value = Fraction(value)
        n, d = math.isqrt(value.numerator), math.isqrt(value.denominator)
        if n * n != value.numerator or d * d != value.denominator:
            raise ValueError(f"sqrt({value}) is irrational; use FloatRing")
        return Laurent.const(Fraction(n, d))


EXACT = ExactRing()


class FloatRing:
    """Floating backend: complex coefficients with numeric ``q`` and ``c``."""

    exact = False

    def __init__(self, q: float, c: float = math.inf, eps: float = 1e-12):
        self.qval = float(q)
        self.cval = float(c)
        self.eps = float(eps)

    def __eq__(self, other):
        return (
            isinstance(other, FloatRing)
            and self.qval == other.qval
            and (self.cval == other.cval)
            and self.eps == other.eps
        )

    def __hash__(self):
        return hash(("FloatRing", self.qval, self.cval, self.eps))

    def __repr__(self):
        return f"FloatRing(q={self.qval!r}, c={self.cval!r}, eps={self.eps!r})"

    @property
    def zero(self) -> complex:
        return 0j

    @property
    def one(self) -> complex:
        return 1 + 0j

    @property
    def q(self) -> complex:
        return complex(self.qval)

    @property
    def c(self) -> complex:
        if math.isinf(self.cval):
            raise ValueError("c is infinite in this ring")
        return complex(self.cval)

    def coerce(self, x) -> complex:
        if isinstance(x, Laurent):
            return x.evaluate(self.qval, None if math.isinf(self.cval) else self.cval)
        return complex(x)

    def is_zero(self, x, tol=None) -> bool:
        return abs(x) <= (self.eps if tol is None else tol)

    def conj(self, x: complex) -> complex:
        return x.conjugate()

    def magnitude(self, x: complex) -> float:
        return abs(x)

    def evaluate(self, x: complex, q: float = None, c: float | None = None) -> complex:
        return complex(x)

    def fmt(self, x: complex) -> tuple[str, bool]:
        x = complex(x)
        if x.imag == 0:
            return repr(x.real), False
        if x.real == 0:
            return f"{x.imag!r}*i", False
        sign = "+" if x.imag >= 0 else "-"
        return f"({x.real!r} {sign} {abs(x.imag)!r}*i)", True

    def sqrt(self, x) -> complex:
        return complex(math.sqrt(complex(x).real))
