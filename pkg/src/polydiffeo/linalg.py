"""Small exact linear algebra over the rationals."""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

Rational = Fraction


def as_fraction(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, float):
        raise TypeError("floats are not accepted in exact arithmetic")
    return Fraction(value)


def row_echelon(rows: Sequence[Sequence[Fraction]]) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form and the pivot columns."""
    m = [[as_fraction(v) for v in r] for r in rows]
    pivots: list[int] = []
    if not m:
        return m, pivots
    ncols = len(m[0])
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        inv = 1 / m[r][c]
        m[r] = [v * inv for v in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                factor = m[i][c]
                m[i] = [a - factor * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m, pivots


def rank(rows: Sequence[Sequence[Fraction]]) -> int:
    return len(row_echelon(rows)[1])


def solve_unique(columns: Sequence[Sequence[Fraction]], rhs: Sequence[Fraction]) -> list[Fraction] | None:
    """Solve ``sum_j x_j * columns[j] == rhs``.

    Returns the solution when it exists and is unique, otherwise ``None``
    (inconsistent system or linearly dependent columns).
    """
    k = len(columns)
    dim = len(rhs)
    aug = [[as_fraction(columns[j][i]) for j in range(k)] + [as_fraction(rhs[i])] for i in range(dim)]
    red, pivots = row_echelon(aug)
    if k in pivots or len(pivots) != k:
        return None
    vec = [Fraction(0)] * k
    for row, c in zip(red, pivots):
        vec[c] = row[k]
    return vec


def det(matrix: Sequence[Sequence]) -> Fraction:
    """Exact determinant by fraction-valued Gaussian elimination."""
    m = [[as_fraction(v) for v in r] for r in matrix]
    dim = len(m)
    if any(len(r) != dim for r in m):
        raise ValueError("determinant needs a square matrix")
    result = Fraction(1)
    for c in range(dim):
        p = next((i for i in range(c, dim) if m[i][c] != 0), None)
        if p is None:
            return Fraction(0)
        if p != c:
            m[c], m[p] = m[p], m[c]
            result = -result
        pivot = m[c][c]
        result *= pivot
        for i in range(c + 1, dim):
            if m[i][c] != 0:
                factor = m[i][c] / pivot
                m[i] = [a - factor * b for a, b in zip(m[i], m[c])]
    return result


def int_det(matrix: Sequence[Sequence[int]]) -> int:
    """Bareiss fraction-free determinant of an integer matrix."""
    m = [list(r) for r in matrix]
    dim = len(m)
    if dim == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(dim - 1):
        if m[k][k] == 0:
            p = next((i for i in range(k + 1, dim) if m[i][k] != 0), None)
            if p is None:
                return 0
            m[k], m[p] = m[p], m[k]
            sign = -sign
        for i in range(k + 1, dim):
            for j in range(k + 1, dim):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
        prev = m[k][k]
    return sign * m[dim - 1][dim - 1]


def affinely_independent(points: Iterable[Sequence]) -> bool:
    lifted = [list(p) + [1] for p in points]
    return rank(lifted) == len(lifted)


class RationalMatrix:
    """Immutable square matrix with rational entries."""

    __slots__ = ("rows",)

    def __init__(self, rows: Iterable[Iterable]):
        rows = tuple(tuple(as_fraction(v) for v in r) for r in rows)
        if not rows or any(len(r) != len(rows) for r in rows):
            raise ValueError("matrix must be square and nonempty")
        object.__setattr__(self, "rows", rows)

    def __setattr__(self, name, value):
        raise AttributeError("RationalMatrix is immutable")

    @classmethod
    def identity(cls, dim: int) -> "RationalMatrix":
        return cls([[1 if i == j else 0 for j in range(dim)] for i in range(dim)])

    @property
    def dim(self) -> int:
        return len(self.rows)

    def det(self) -> Fraction:
        return det(self.rows)

    def is_regular(self) -> bool:
        return self.det() != 0

    def apply(self, vec: Sequence) -> tuple[Fraction, ...]:
        if len(vec) != self.dim:
            raise ValueError("vector length does not match matrix size")
        xs = [as_fraction(v) for v in vec]
        return tuple(sum((a * b for a, b in zip(r, xs)), Fraction(0)) for r in self.rows)

    def __eq__(self, other):
        return isinstance(other, RationalMatrix) and self.rows == other.rows

    def __hash__(self):
        return hash(self.rows)

    def __repr__(self):
        return f"RationalMatrix({self.to_lists()!r})"

    def to_lists(self) -> list[list[str]]:
        return [[str(v) for v in r] for r in self.rows]
