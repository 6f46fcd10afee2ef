"""Exact sparse multivariate polynomials over the rationals.

A :class:`Polynomial` maps exponent tuples to nonzero :class:`~fractions.Fraction`
coefficients, so its key set is exactly the support. Variables are named
``x1 .. xn`` and indexed from 1 in every public function.

    >>> f = parse_polynomial("x1 + x1^3 - x2^3", 2)
    >>> sorted(f.terms.items())
    [((0, 3), Fraction(-1, 1)), ((1, 0), Fraction(1, 1)), ((3, 0), Fraction(1, 1))]
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from types import MappingProxyType
from typing import Iterable, Mapping, Sequence

from .linalg import RationalMatrix, as_fraction

Exponent = tuple[int, ...]


class DimensionError(ValueError):
    pass


class PolynomialSyntaxError(ValueError):
    def __init__(self, message: str, position: int, text: str = ""):
        super().__init__(f"{message} at position {position}")
        self.message = message
        self.position = position
        self.text = text


def grlex_key(alpha: Sequence[int]) -> tuple:
    """Sort key for the graded lexicographic order (ascending)."""
    return (sum(alpha), tuple(alpha))


def sort_grlex(exponents: Iterable[Sequence[int]]) -> list[Exponent]:
    return sorted((tuple(a) for a in exponents), key=grlex_key)


def unit_vector(dim: int, i: int, k: int = 1) -> Exponent:
    """``k * e_i`` with 1-based ``i``."""
    return tuple(k if j == i - 1 else 0 for j in range(dim))


def is_even(alpha: Sequence[int]) -> bool:
    return all(a % 2 == 0 for a in alpha)


class Polynomial:
    __slots__ = ("dim", "_terms", "_hash")

    def __init__(self, dim: int, terms: Mapping[Sequence[int], object] | None = None):
        if dim < 1:
            raise DimensionError("dimension must be at least 1")
        clean: dict[Exponent, Fraction] = {}
        for alpha, c in (terms or {}).items():
            alpha = tuple(int(a) for a in alpha)
            if len(alpha) != dim:
                raise DimensionError(f"exponent {alpha} has length {len(alpha)}, expected {dim}")
            if any(a < 0 for a in alpha):
                raise ValueError(f"negative exponent in {alpha}")
            c = as_fraction(c)
            if c != 0:
                clean[alpha] = clean.get(alpha, Fraction(0)) + c
                if clean[alpha] == 0:
                    del clean[alpha]
        object.__setattr__(self, "dim", dim)
        object.__setattr__(self, "_terms", clean)
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, name, value):
        raise AttributeError("Polynomial is immutable")

    @classmethod
    def constant(cls, dim: int, c) -> "Polynomial":
        return cls(dim, {(0,) * dim: c})

    @classmethod
    def variable(cls, dim: int, i: int) -> "Polynomial":
        if not 1 <= i <= dim:
            raise DimensionError(f"variable index {i} out of range 1..{dim}")
        return cls(dim, {unit_vector(dim, i): 1})

    @classmethod
    def monomial(cls, alpha: Sequence[int], c=1) -> "Polynomial":
        return cls(len(alpha), {tuple(alpha): c})

    @property
    def terms(self) -> Mapping[Exponent, Fraction]:
        return MappingProxyType(self._terms)

    def support(self) -> list[Exponent]:
        return sort_grlex(self._terms)

    def coefficient(self, alpha: Sequence[int]) -> Fraction:
        return self._terms.get(tuple(alpha), Fraction(0))

    def is_zero(self) -> bool:
        return not self._terms

    def degree(self) -> int:
        return max((sum(a) for a in self._terms), default=-1)

    def _check(self, other: "Polynomial"):
        if self.dim != other.dim:
            raise DimensionError(f"dimension mismatch: {self.dim} vs {other.dim}")

    def _coerce(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            self._check(other)
            return other
        if isinstance(other, (int, Fraction)):
            return Polynomial.constant(self.dim, other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self._terms)
        for a, c in other._terms.items():
            out[a] = out.get(a, Fraction(0)) + c
        return Polynomial(self.dim, out)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial(self.dim, {a: -c for a, c in self._terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return Polynomial(self.dim, {a: c * other for a, c in self._terms.items()})
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out: dict[Exponent, Fraction] = {}
        for a, ca in self._terms.items():
            for b, cb in other._terms.items():
                key = tuple(p + q for p, q in zip(a, b))
                out[key] = out.get(key, Fraction(0)) + ca * cb
        return Polynomial(self.dim, out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise ValueError("only nonnegative integer powers are supported")
        result = Polynomial.constant(self.dim, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return self.dim == other.dim and self._terms == other._terms
        if isinstance(other, (int, Fraction)):
            return self == Polynomial.constant(self.dim, other)
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            object.__setattr__(self, "_hash", hash((self.dim, frozenset(self._terms.items()))))
        return self._hash

    def evaluate(self, point: Sequence) -> Fraction:
        if len(point) != self.dim:
            raise DimensionError(f"point has length {len(point)}, expected {self.dim}")
        xs = [as_fraction(v) for v in point]
        total = Fraction(0)
        for alpha, c in self._terms.items():
            term = c
            for xi, ai in zip(xs, alpha):
                if ai:
                    term *= xi ** ai
            total += term
        return total

    def partial_derivative(self, i: int) -> "Polynomial":
        if not 1 <= i <= self.dim:
            raise DimensionError(f"variable index {i} out of range 1..{self.dim}")
        k = i - 1
        out = {}
        for alpha, c in self._terms.items():
            if alpha[k]:
                beta = alpha[:k] + (alpha[k] - 1,) + alpha[k + 1:]
                out[beta] = c * alpha[k]
        return Polynomial(self.dim, out)

    def to_text(self) -> str:
        """Render in the parser's grammar, highest grlex term first."""
        if not self._terms:
            return "0"
        parts = []
        for alpha in reversed(self.support()):
            c = self._terms[alpha]
            mono = "*".join(
                f"x{j + 1}" if a == 1 else f"x{j + 1}^{a}" for j, a in enumerate(alpha) if a
            )
            mag = abs(c)
            if not mono:
                body = str(mag)
            elif mag == 1:
                body = mono
            else:
                body = f"{mag}*{mono}"
            sign = "-" if c < 0 else "+"
            parts.append((sign, body))
        first_sign, first = parts[0]
        out = ("-" if first_sign == "-" else "") + first
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out

    __str__ = to_text

    def __repr__(self):
        return f"Polynomial({self.dim}, {self.to_text()!r})"


@dataclass(frozen=True)
class PolynomialMap:
    """``F = (F_1, ..., F_n)`` with each component in ``n`` variables."""

    components: tuple[Polynomial, ...]

    def __post_init__(self):
        comps = tuple(self.components)
        object.__setattr__(self, "components", comps)
        dim = len(comps)
        if dim == 0:
            raise DimensionError("a polynomial map needs at least one component")
        for i, p in enumerate(comps, 1):
            if p.dim != dim:
                raise DimensionError(f"component F{i} has dimension {p.dim}, expected {dim}")

    @property
    def dim(self) -> int:
        return len(self.components)

    def __iter__(self):
        return iter(self.components)

    def __getitem__(self, i: int) -> Polynomial:
        return self.components[i]

    def evaluate(self, point: Sequence) -> tuple[Fraction, ...]:
        return tuple(p.evaluate(point) for p in self.components)

    @classmethod
    def parse(cls, texts: Sequence[str]) -> "PolynomialMap":
        dim = len(texts)
        return cls(tuple(parse_polynomial(text, dim) for text in texts))

    def to_texts(self) -> list[str]:
        return [p.to_text() for p in self.components]


# --- parsing -------------------------------------------------------------

_TOKEN = re.compile(
    r"(?P<var>x(?P<idx>\d+))"
    r"|(?P<num>\d+(?:/\d+)?)"
    r"|(?P<op>[-+*^()/])"
)


def _tokenize(text: str):
    compact = []
    positions = []
    for pos, ch in enumerate(text):
        if not ch.isspace():
            compact.append(ch)
            positions.append(pos)
    s = "".join(compact)
    tokens = []
    i = 0
    while i < len(s):
        m = _TOKEN.match(s, i)
        if m is None:
            raise PolynomialSyntaxError(f"unexpected character {s[i]!r}", positions[i], text)
        tokens.append((m.lastgroup if m.lastgroup != "idx" else "var", m.group(0), positions[i]))
        i = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str, dim: int):
        self.text = text
        self.dim = dim
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def error(self, message, tok=None):
        tok = tok or self.peek()
        raise PolynomialSyntaxError(message, tok[2], self.text)

    def parse(self) -> Polynomial:
        if self.peek()[0] == "end":
            self.error("empty polynomial")
        total = self.term()
        while self.peek()[0] == "op" and self.peek()[1] in "+-":
            total = total + self.term()
        if self.peek()[0] != "end":
            self.error(f"unexpected token {self.peek()[1]!r}")
        return total

    def term(self) -> Polynomial:
        sign = 1
        while self.peek()[0] == "op" and self.peek()[1] in "+-":
            if self.take()[1] == "-":
                sign = -sign
        value = self.factor()
        while True:
            kind, val, _ = self.peek()
            if kind == "op" and val == "*":
                self.take()
                value = value * self.factor()
            elif kind in ("var", "num") or (kind == "op" and val == "("):
                value = value * self.factor()
            else:
                break
        return value * sign

    def exponent(self) -> int:
        if self.peek()[0] == "op" and self.peek()[1] == "^":
            self.take()
            tok = self.peek()
            if tok[0] != "num" or "/" in tok[1]:
                self.error("exponent must be a nonnegative integer")
            self.take()
            return int(tok[1])
        return 1

    def factor(self) -> Polynomial:
        kind, val, pos = self.peek()
        if kind == "var":
            self.take()
            idx = int(val[1:])
            if not 1 <= idx <= self.dim:
                raise PolynomialSyntaxError(
                    f"variable index {idx} out of range 1..{self.dim}", pos, self.text
                )
            return Polynomial.variable(self.dim, idx) ** self.exponent()
        if kind == "num":
            self.take()
            c = Fraction(val)
            if "/" in val:
                if self.peek()[1] == "^":
                    self.error("parenthesise a fraction before raising it to a power")
                return Polynomial.constant(self.dim, c)
            return Polynomial.constant(self.dim, c ** self.exponent())
        if kind == "op" and val == "(":
            # parenthesised signed rational literal, as produced by parameter substitution
            self.take()
            sign = 1
            while self.peek()[0] == "op" and self.peek()[1] in "+-":
                if self.take()[1] == "-":
                    sign = -sign
            tok = self.peek()
            if tok[0] != "num":
                self.error("expected a rational literal inside parentheses")
            self.take()
            if self.peek()[1] != ")":
                self.error("expected ')'")
            self.take()
            c = sign * Fraction(tok[1])
            return Polynomial.constant(self.dim, c ** self.exponent())
        if kind == "end":
            self.error("unexpected end of input")
        self.error(f"unexpected token {val!r}")


def parse_polynomial(text: str, dim: int) -> Polynomial:
    """Parse ``text`` as a polynomial in ``x1..xn``.

    Terms are separated by ``+``/``-``; a term is a product of rational
    literals (``3``, ``1/2``, ``(-2/3)``) and powers ``x<i>^<k>``, with
    ``*`` optional. Whitespace is ignored.
    """
    if dim < 1:
        raise DimensionError("dimension must be at least 1")
    return _Parser(text, dim).parse()


# --- module-level operations ---------------------------------------------

def evaluate(poly: Polynomial, point: Sequence) -> Fraction:
    return poly.evaluate(point)


def multiply(poly: Polynomial, other: Polynomial) -> Polynomial:
    poly._check(other)
    return poly * other


def partial_derivative(poly: Polynomial, i: int) -> Polynomial:
    return poly.partial_derivative(i)


def sos(fmap: PolynomialMap) -> Polynomial:
    """``||F||_2^2 = sum_i F_i^2``."""
    total = Polynomial(fmap.dim)
    for p in fmap:
        total = total + p * p
    return total


def compose_linear(fmap: PolynomialMap, inverse: RationalMatrix) -> PolynomialMap:
    """Return ``y -> F(inverse @ y)`` fully expanded."""
    dim = fmap.dim
    if inverse.dim != dim:
        raise DimensionError(f"matrix is {inverse.dim}x{inverse.dim}, map has dimension {dim}")
    if not inverse.is_regular():
        raise ValueError("transform matrix is singular")
    linear = [
        Polynomial(dim, {unit_vector(dim, j + 1): inverse.rows[i][j] for j in range(dim)})
        for i in range(dim)
    ]
    powers: dict[tuple[int, int], Polynomial] = {}

    def power(i: int, k: int) -> Polynomial:
        key = (i, k)
        if key not in powers:
            powers[key] = Polynomial.constant(dim, 1) if k == 0 else power(i, k - 1) * linear[i]
        return powers[key]

    out = []
    for p in fmap:
        acc: dict[Exponent, Fraction] = {}
        for alpha, c in p.terms.items():
            prod = Polynomial.constant(dim, c)
            for i, a in enumerate(alpha):
                if a:
                    prod = prod * power(i, a)
            for beta, coef in prod.terms.items():
                acc[beta] = acc.get(beta, Fraction(0)) + coef
        out.append(Polynomial(dim, acc))
    return PolynomialMap(tuple(out))
