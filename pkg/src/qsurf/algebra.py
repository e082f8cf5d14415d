"""Noncommutative *-polynomials and rewriting to normal form.

A word is a tuple of letter names.  Starred letters carry a trailing ``*``
(``"B*"``); self-adjoint generators have no starred partner.  An
:class:`Element` is a finite map ``word -> coefficient`` over one of the
rings in :mod:`qsurf.rings`.

Normal forms are computed by left-to-right multiplication: the running
result is always a combination of basis words, so when a new letter is
appended the only possible redex ends at that letter.  Products
``basis_word * letter`` are memoized per presentation.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Callable, Iterable, Mapping


__all__ = [
    "Alphabet",
    "Element",
    "Presentation",
    "StarHom",
    "HomCheck",
    "RewriteBudgetExceeded",
    "REWRITE_BUDGET",
    "star_word",
    "normal_form",
    "equals",
    "apply_hom",
    "check_hom",
    "identity_hom",
    "compose_hom",
    "words_matching",
    "random_words",
]

Word = tuple

REWRITE_BUDGET = 10**6


class RewriteBudgetExceeded(RuntimeError):
    """Raised when normalizing one element needs more than the step budget."""


@dataclass(frozen=True)
class Alphabet:
    """Generators with their star pairing.

    ``generators`` lists the plain symbols; those in ``selfadjoint`` have no
    starred partner, every other symbol ``X`` comes with the letter ``X*``.
    """

    generators: tuple
    selfadjoint: frozenset = frozenset()

    @property
    def letters(self) -> tuple:
        out = []
        for g in self.generators:
            out.append(g)
            if g not in self.selfadjoint:
                out.append(g + "*")
        return tuple(out)

    def star_letter(self, letter: str) -> str:
        if letter.endswith("*"):
            return letter[:-1]
        if letter in self.selfadjoint:
            return letter
        return letter + "*"

    def __contains__(self, letter) -> bool:
        return letter in self.letters


def star_word(word: Word, alphabet: Alphabet) -> Word:
    return tuple(alphabet.star_letter(x) for x in reversed(word))


def _check_same(a: "Element", b: "Element") -> None:
    if a.ring != b.ring:
        raise TypeError(f"coefficient backend mismatch: {a.ring!r} vs {b.ring!r}")
    if a.alphabet != b.alphabet:
        raise TypeError("elements live over different alphabets")


class Element:
    """Finite linear combination of words; zero coefficients are dropped."""

    __slots__ = ("ring", "alphabet", "terms")

    def __init__(self, ring, alphabet: Alphabet, terms: Mapping | None = None):
        self.ring = ring
        self.alphabet = alphabet
        clean = {}
        if terms:
            zero = ring.zero
            for w, coef in terms.items():
                coef = ring.coerce(coef)
                if coef != zero:
                    clean[tuple(w)] = coef
        self.terms = clean

    # -- constructors -------------------------------------------------------
    @classmethod
    def scalar(cls, value, ring, alphabet) -> "Element":
        return cls(ring, alphabet, {(): value})

    @classmethod
    def word(cls, word, ring, alphabet, coef=1) -> "Element":
        word = tuple(word)
        for x in word:
            if x not in alphabet:
                raise KeyError(f"unknown generator {x!r}")
        return cls(ring, alphabet, {word: coef})

    def _same_space(self, terms) -> "Element":
        return Element(self.ring, self.alphabet, terms)

    def _lift(self, other) -> "Element":
        if isinstance(other, Element):
            _check_same(self, other)
            return other
        return Element.scalar(self.ring.coerce(other), self.ring, self.alphabet)

    # -- arithmetic (no normalization) ---------------------------------------
    def __add__(self, other):
        other = self._lift(other)
        out = dict(self.terms)
        for w, coef in other.terms.items():
            out[w] = out[w] + coef if w in out else coef
        return self._same_space(out)

    __radd__ = __add__

    def __neg__(self):
        return self._same_space({w: -coef for w, coef in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) + (-self)

    def __mul__(self, other):
        if not isinstance(other, Element):
            s = self.ring.coerce(other)
            return self._same_space({w: s * coef for w, coef in self.terms.items()})
        _check_same(self, other)
        out = {}
        for w1, c1 in self.terms.items():
            for w2, c2 in other.terms.items():
                w = w1 + w2
                coef = c1 * c2
                out[w] = out[w] + coef if w in out else coef
        return self._same_space(out)

    def __rmul__(self, other):
        s = self.ring.coerce(other)
        return self._same_space({w: s * coef for w, coef in self.terms.items()})

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            raise ValueError("elements only take non-negative integer powers")
        out = Element.scalar(1, self.ring, self.alphabet)
        for _ in range(n):
            out = out * self
        return out

    def star(self) -> "Element":
        conj = self.ring.conj
        return self._same_space(
            {star_word(w, self.alphabet): conj(coef) for w, coef in self.terms.items()}
        )

    # -- queries ------------------------------------------------------------
    def is_zero(self, tol=None) -> bool:
        return all(self.ring.is_zero(coef, tol) for coef in self.terms.values())

    def max_coefficient(self) -> float:
        return max((self.ring.magnitude(c) for c in self.terms.values()), default=0.0)

    def coefficient(self, word) -> object:
        return self.terms.get(tuple(word), self.ring.zero)

    def words(self) -> list:
        return sorted(self.terms, key=lambda w: (len(w), w))

    def letters(self) -> set:
        return {x for w in self.terms for x in w}

    def __eq__(self, other):
        if not isinstance(other, Element):
            try:
                other = self._lift(other)
            except (TypeError, ValueError):
                return NotImplemented
        return (
            self.ring == other.ring
            and self.alphabet == other.alphabet
            and self.terms == other.terms
        )

    __hash__ = None

    def __repr__(self):
        return f"Element({self})"

    def __str__(self):
        return format_element(self)


def _fmt_word(word: Word) -> str:
    # Runs of the same letter are written as powers.
    parts = []
    i = 0
    while i < len(word):
        j = i
        while j < len(word) and word[j] == word[i]:
            j += 1
        letter = word[i]
        shown = letter[:-1] + "'" if letter.endswith("*") else letter
        parts.append(shown if j - i == 1 else f"{shown}^{j - i}")
        i = j
    return "*".join(parts)


def format_element(a: Element) -> str:
    """Render an element in the expression grammar understood by the parser."""
    if not a.terms:
        return "0"
    out = []
    for w in a.words():
        coef = a.terms[w]
        text, compound = a.ring.fmt(coef)
        negative = False
        if not compound and text.startswith("-"):
            negative, text = True, text[1:]
        if compound:
            text = f"({text})" if not text.startswith("(") else text
        body = _fmt_word(w)
        if not body:
            piece = text
        elif text == "1" or text == "1.0":
            piece = body
        else:
            piece = f"{text}*{body}"
        out.append(("-" if negative else "+", piece))
    head_sign, head = out[0]
    s = ("-" if head_sign == "-" else "") + head
    for sign, piece in out[1:]:
        s += f" {sign} {piece}"
    return s


@dataclass(eq=False)
class Presentation:
    """Generators, star structure and oriented rewrite rules.

    ``rules`` maps a left word to the element it rewrites to.
    ``relations`` holds the defining identities as originally stated
    (``label, lhs, rhs``); they need not be in rule form.
    ``basis`` is the designated normal-form predicate; every rule's left
    word must fail it.
    """

    name: str
    ring: object
    alphabet: Alphabet
    rules: dict
    relations: list
    basis: Callable[[Word], bool]
    amplitudes: dict = field(default_factory=dict)
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        self._by_length = {}
        for lhs, rhs in self.rules.items():
            if self.basis(lhs):
                raise ValueError(f"rule left side {lhs} is a basis word")
            if rhs.ring != self.ring or rhs.alphabet != self.alphabet:
                raise TypeError(f"rule {lhs} has a right side in a different space")
            self._by_length.setdefault(len(lhs), {})[tuple(lhs)] = rhs
        self._lengths = sorted(self._by_length)
        self._mul_cache = {}

    # -- element builders ---------------------------------------------------
    def gen(self, name: str) -> Element:
        return Element.word((name,), self.ring, self.alphabet)

    def one(self) -> Element:
        return Element.scalar(1, self.ring, self.alphabet)

    def scalar(self, value) -> Element:
        return Element.scalar(value, self.ring, self.alphabet)

    def word(self, word, coef=1) -> Element:
        return Element.word(word, self.ring, self.alphabet, coef)

    def is_reducible(self, word: Word) -> bool:
        word = tuple(word)
        for n, table in self._by_length.items():
            for i in range(len(word) - n + 1):
                if word[i : i + n] in table:
                    return True
        return False

    def shift_degree(self, word: Word) -> int:
        return sum(self.amplitudes.get(x, 0) for x in word)

    def __repr__(self):
        return f"Presentation({self.name!r}, {self.ring!r})"


class _Budget:
    __slots__ = ("left", "active")

    def __init__(self, n):
        self.left = n
        self.active = set()

    def spend(self):
        self.left -= 1
        if self.left < 0:
            raise RewriteBudgetExceeded("rewrite-step budget exceeded; rules do not terminate")


def _accumulate(out: dict, word, coef):
    if word in out:
        out[word] = out[word] + coef
    else:
        out[word] = coef


def _mul_letter(p: Presentation, base: Word, letter: str, budget: _Budget) -> dict:
    """Normal form of ``base * letter`` where ``base`` is irreducible."""
    key = (base, letter)
    cached = p._mul_cache.get(key)
    if cached is not None:
        return cached
    w = base + (letter,)
    for n in p._lengths:
        if n > len(w):
            break
        rhs = p._by_length[n].get(w[-n:])
        if rhs is None:
            continue
        budget.spend()
        if key in budget.active:
            raise RewriteBudgetExceeded(f"rewriting {w} leads back to itself; rules do not terminate")
        budget.active.add(key)
        prefix = w[:-n]
        out = {}
        for v, coef in rhs.terms.items():
            for bw, bc in _mul_word(p, prefix, v, budget).items():
                _accumulate(out, bw, coef * bc)
        budget.active.discard(key)
        zero = p.ring.zero
        out = {w2: c for w2, c in out.items() if c != zero}
        p._mul_cache[key] = out
        return out
    out = {w: p.ring.one}
    p._mul_cache[key] = out
    return out


def _mul_word(p: Presentation, base: Word, word: Word, budget: _Budget) -> dict:
    current = {base: p.ring.one}
    for letter in word:
        nxt = {}
        for bw, bc in current.items():
            for w2, c2 in _mul_letter(p, bw, letter, budget).items():
                _accumulate(nxt, w2, bc * c2)
        current = nxt
    return current


def normal_form(a: Element, p: Presentation, budget: int = REWRITE_BUDGET) -> Element:
    """Rewrite ``a`` to a combination of basis words of ``p``."""
    if a.ring != p.ring:
        raise TypeError(f"coefficient backend mismatch: {a.ring!r} vs {p.ring!r}")
    if a.alphabet != p.alphabet:
        raise TypeError(f"element is not over the alphabet of {p.name}")
    steps = _Budget(budget)
    out = {}
    try:
        for w, coef in a.terms.items():
            for bw, bc in _mul_word(p, (), w, steps).items():
                _accumulate(out, bw, coef * bc)
    except RecursionError:
        raise RewriteBudgetExceeded("rewriting nests too deeply; rules do not terminate") from None
    return Element(p.ring, p.alphabet, out)


def equals(a: Element, b: Element, p: Presentation, tol: float | None = None) -> bool:
    _check_same(a, b)
    diff = normal_form(a - b, p)
    if p.ring.exact:
        return not diff.terms
    return diff.is_zero(tol)


@dataclass(eq=False)
class StarHom:
    """*-homomorphism given on generators.

    Images of starred letters default to the star of the plain image.
    """

    name: str
    source: Presentation
    target: Presentation
    images: dict

    def __post_init__(self):
        full = {}
        for g in self.source.alphabet.generators:
            if g not in self.images:
                raise KeyError(f"{self.name}: no image for generator {g!r}")
            img = self.images[g]
            if img.ring != self.target.ring or img.alphabet != self.target.alphabet:
                raise TypeError(f"{self.name}: image of {g} is not in the target")
            full[g] = img
            if g not in self.source.alphabet.selfadjoint:
                full[g + "*"] = self.images.get(g + "*", img.star())
        self.images = full

    def image(self, letter: str) -> Element:
        try:
            return self.images[letter]
        except KeyError:
            raise KeyError(f"{self.name}: unknown generator {letter!r}") from None


def apply_hom(h: StarHom, a: Element) -> Element:
    """Extend ``h`` multiplicatively and linearly; result is normalized."""
    if a.alphabet != h.source.alphabet:
        raise TypeError(f"{h.name}: element is not over the source alphabet")
    tgt = h.target
    coerce = tgt.ring.coerce
    total = Element(tgt.ring, tgt.alphabet)
    for w, coef in a.terms.items():
        acc = tgt.one()
        for letter in w:
            acc = normal_form(acc * h.image(letter), tgt)
        total = total + acc * coerce(coef)
    return normal_form(total, tgt)


@dataclass
class HomCheck:
    """Result of checking that every source relation maps to zero."""

    name: str
    residuals: dict
    exact: bool

    @property
    def max_residual(self) -> float:
        return max(self.residuals.values(), default=0.0)

    @property
    def ok(self) -> bool:
        return self.max_residual == 0.0 if self.exact else self.max_residual < 1e-10


def check_hom(h: StarHom) -> HomCheck:
    residuals = {}
    for label, lhs, rhs in h.source.relations:
        img = normal_form(apply_hom(h, lhs) - apply_hom(h, rhs), h.target)
        residuals[label] = img.max_coefficient()
    return HomCheck(h.name, residuals, h.target.ring.exact)


def identity_hom(p: Presentation) -> StarHom:
    return StarHom("id", p, p, {g: p.gen(g) for g in p.alphabet.generators})


def compose_hom(outer: StarHom, inner: StarHom, name: str | None = None) -> StarHom:
    """``outer o inner`` on generators."""
    if inner.target.alphabet != outer.source.alphabet:
        raise TypeError("homomorphisms are not composable")
    images = {g: apply_hom(outer, inner.image(g)) for g in inner.source.alphabet.generators}
    return StarHom(name or f"{outer.name}o{inner.name}", inner.source, outer.target, images)


def words_matching(pattern: str, code: Mapping[str, str]) -> Callable[[Word], bool]:
    """Basis predicate from a regex over a one-character-per-letter encoding."""
    rx = re.compile(pattern)

    def check(word: Word) -> bool:
        try:
            s = "".join(code[x] for x in word)
        except KeyError:
            return False
        return rx.fullmatch(s) is not None

    return check


def random_words(rng, letters: Iterable[str], count: int, max_len: int, min_len: int = 1):
    letters = list(letters)
    out = []
    for _ in range(count):
        n = int(rng.integers(min_len, max_len + 1))
        out.append(tuple(letters[i] for i in rng.integers(0, len(letters), size=n)))
    return out

