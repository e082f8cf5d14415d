"""Expression parser for the command line.

Grammar (whitespace ignored)::

    expr    := ["+" | "-"] term (("+" | "-") term)*
    term    := postfix (("*" postfix) | ("/" number))*
    postfix := atom ("'" | "^" ["-"] integer)*
    atom    := number | "q" | "c" | "i" | generator | "(" expr ")"

``'`` is the adjoint.  Negative exponents are only accepted on ``q``.
Division is only by a numeric literal, so printed rationals such as
``3/2*q^2`` read back unchanged.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

from .algebra import Element, Presentation
from .rings import EXACT
from .surfaces import build_presentation

__all__ = ["ParseError", "ALGEBRAS", "presentation_for", "parse_expression"]

ALGEBRAS = ("equator", "sphere", "disc", "rp2")

_TOKEN = re.compile(
    r"\s*(?:(?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)|(?P<name>[A-Za-z][A-Za-z0-9]*)|(?P<op>[-+*/^'()]))"
)


class ParseError(ValueError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at position {position}")
        self.position = position


@dataclass
class _Tok:
    kind: str
    text: str
    pos: int


def _tokenize(text: str) -> list[_Tok]:
    out = []
    pos = 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m:
            start = pos + len(text[pos:]) - len(text[pos:].lstrip())
            raise ParseError(f"unexpected character {text[start]!r}", start)
        kind = m.lastgroup
        out.append(_Tok(kind, m.group(kind), m.start(kind)))
        pos = m.end()
    out.append(_Tok("end", "", len(text)))
    return out


def presentation_for(algebra: str, ring=EXACT, c=None) -> Presentation:
    """Presentation behind an algebra id; ``sphere`` with ``c = inf`` is the equator."""
    if algebra not in ALGEBRAS:
        raise ValueError(f"unknown algebra {algebra!r}; choose from {', '.join(ALGEBRAS)}")
    if algebra == "sphere":
        return build_presentation("sphere", ring, c=c)
    return build_presentation(algebra, ring)


class _Parser:
    def __init__(self, text: str, p: Presentation):
        self.toks = _tokenize(text)
        self.i = 0
        self.p = p
        self.ring = p.ring
        self.gens = set(p.alphabet.generators)

    @property
    def tok(self) -> _Tok:
        return self.toks[self.i]

    def take(self, text=None, kind=None) -> _Tok:
        t = self.tok
        if (text is not None and t.text != text) or (kind is not None and t.kind != kind):
            want = repr(text) if text is not None else {"num": "a number"}.get(kind, kind)
            got = repr(t.text) if t.kind != "end" else "end of input"
            raise ParseError(f"expected {want}, got {got}", t.pos)
        self.i += 1
        return t

    def number(self, t: _Tok):
        return Fraction(t.text) if self.ring.exact else float(t.text)

    def scalar(self, value) -> Element:
        return Element.scalar(value, self.ring, self.p.alphabet)

    def parse(self) -> Element:
        e = self.expr()
        if self.tok.kind != "end":
            raise ParseError(f"unexpected {self.tok.text!r}", self.tok.pos)
        return e

    def expr(self) -> Element:
        sign = 1
        if self.tok.kind == "op" and self.tok.text in ("+", "-"):
            sign = -1 if self.take().text == "-" else 1
        e = self.term() * sign
        while self.tok.kind == "op" and self.tok.text in ("+", "-"):
            op = self.take().text
            t = self.term()
            e = e + t if op == "+" else e - t
        return e

    def term(self) -> Element:
        e = self.postfix()
        while self.tok.kind == "op" and self.tok.text in ("*", "/"):
            op = self.take().text
            if op == "*":
                e = e * self.postfix()
            else:
                t = self.take(kind="num")
                d = self.number(t)
                if d == 0:
                    raise ParseError("division by zero", t.pos)
                e = e * self.ring.coerce(1 / d if not self.ring.exact else Fraction(1) / d)
        return e

    def postfix(self) -> Element:
        bare_q = self.tok.kind == "name" and self.tok.text == "q" and "q" not in self.gens
        e = self.atom()
        while self.tok.kind == "op" and self.tok.text in ("'", "^"):
            if self.take().text == "'":
                e = e.star()
                bare_q = False
                continue
            negative = False
            if self.tok.text == "-":
                negative = True
                self.take()
            t = self.take(kind="num")
            if not t.text.isdigit():
                raise ParseError("exponent must be an integer", t.pos)
            n = int(t.text)
            if negative:
                if not bare_q:
                    raise ParseError("negative exponents are only allowed on q", t.pos)
                e = self.scalar(self.ring.q ** (-n))
            else:
                e = e**n
            bare_q = False
        return e

    def atom(self) -> Element:
        t = self.tok
        if t.kind == "num":
            self.take()
            return self.scalar(self.number(t))
        if t.kind == "name":
            self.take()
            if t.text in self.gens:
                return self.p.gen(t.text)
            if t.text == "q":
                return self.scalar(self.ring.q)
            if t.text == "i":
                return self.scalar(1j)
            if t.text == "c":
                c = self.p.params.get("c") if self.p.name == "sphere" else None
                if c is not None:
                    return self.scalar(Fraction(str(c)) if self.ring.exact else c)
                try:
                    return self.scalar(self.ring.c)
                except ValueError:
                    raise ParseError("c has no value here", t.pos) from None
            known = ", ".join(sorted(self.gens))
            raise ParseError(f"unknown generator {t.text!r} (expected one of {known}, q, c, i)", t.pos)
        if t.text == "(":
            self.take()
            e = self.expr()
            self.take(")")
            return e
        got = repr(t.text) if t.kind != "end" else "end of input"
        raise ParseError(f"unexpected {got}", t.pos)


def parse_expression(text: str, algebra: str | Presentation = "equator", ring=None,
                     c=None) -> Element:
    """Parse ``text`` into an element over the named algebra (or a presentation).

    Without ``ring`` the exact ring is used.
    """
    if isinstance(algebra, Presentation):
        p = algebra
    else:
        p = presentation_for(algebra, ring if ring is not None else EXACT, c)
    return _Parser(text, p).parse()
