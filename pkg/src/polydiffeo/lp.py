"""Exact rational linear programming (two-phase tableau simplex, Bland's rule).

Programs are stated as::

    minimize    objective . x
    subject to  rows[i] . x  <=  rhs[i]     (sense "<=")
                rows[i] . x  ==  rhs[i]     (sense "==")
                x[j] >= 0                   where nonnegative[j]

Infeasible programs come back with a Farkas certificate ``y`` over the rows:
``y[i] >= 0`` on ``<=`` rows, ``y^T A`` is zero on free columns and
nonnegative on sign-constrained ones, and ``y^T b < 0``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .linalg import as_fraction

LE = "<="
EQ = "=="


@dataclass(frozen=True)
class LinearProgram:
    rows: tuple[tuple[Fraction, ...], ...]
    rhs: tuple[Fraction, ...]
    senses: tuple[str, ...]
    nonnegative: tuple[bool, ...] | None = None
    objective: tuple[Fraction, ...] | None = None

    def __post_init__(self):
        rows = tuple(tuple(as_fraction(v) for v in r) for r in self.rows)
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "rhs", tuple(as_fraction(v) for v in self.rhs))
        object.__setattr__(self, "senses", tuple(self.senses))
        if len(rows) != len(self.rhs) or len(rows) != len(self.senses):
            raise ValueError("rows, rhs and senses must have equal length")
        nvars = self.num_vars
        if any(len(r) != nvars for r in rows):
            raise ValueError("all constraint rows must share the variable count")
        if any(s not in (LE, EQ) for s in self.senses):
            raise ValueError(f"senses must be {LE!r} or {EQ!r}")
        nonneg = self.nonnegative
        if nonneg is None:
            nonneg = (True,) * nvars
        object.__setattr__(self, "nonnegative", tuple(bool(b) for b in nonneg))
        if len(self.nonnegative) != nvars:
            raise ValueError("nonnegative flags must match the variable count")
        if self.objective is not None:
            obj = tuple(as_fraction(v) for v in self.objective)
            if len(obj) != nvars:
                raise ValueError("objective length must match the variable count")
            object.__setattr__(self, "objective", obj)

    @property
    def num_vars(self) -> int:
        if self.rows:
            return len(self.rows[0])
        if self.nonnegative is not None:
            return len(self.nonnegative)
        return len(self.objective) if self.objective is not None else 0


@dataclass(frozen=True)
class LPResult:
    status: str  # "optimal" | "infeasible" | "unbounded"
    solution: tuple[Fraction, ...] | None = None
    value: Fraction | None = None
    farkas: tuple[Fraction, ...] | None = None
    pivots: int = field(default=0, compare=False)

    @property
    def feasible(self) -> bool:
        return self.status != "infeasible"


def _pivot(tab: list[list[Fraction]], zrow: list[Fraction], basis: list[int], r: int, c: int):
    prow = tab[r]
    inv = 1 / prow[c]
    if inv != 1:
        prow = [v * inv for v in prow]
        tab[r] = prow
    nz = [j for j, v in enumerate(prow) if v]
    for row in tab + [zrow]:
        if row is prow:
            continue
        factor = row[c]
        if factor:
            for j in nz:
                row[j] -= factor * prow[j]
    basis[r] = c


def _simplex(tab, zrow, basis, allowed: int) -> tuple[str, int]:
    """Minimise in place; columns ``>= allowed`` may not enter."""
    count = 0
    while True:
        enter = next((j for j in range(allowed) if zrow[j] < 0), None)
        if enter is None:
            return "optimal", count
        best = None
        for i, row in enumerate(tab):
            a = row[enter]
            if a > 0:
                ratio = row[-1] / a
                key = (ratio, basis[i])
                if best is None or key < best[0]:
                    best = (key, i)
        if best is None:
            return "unbounded", count
        _pivot(tab, zrow, basis, best[1], enter)
        count += 1


def solve(lp: LinearProgram) -> LPResult:
    """Solve ``lp`` exactly. Without an objective this is a feasibility check."""
    m = len(lp.rows)
    nvars = lp.num_vars

    # column layout: split free variables, then one slack per "<=" row
    colmap: list[tuple[int, int]] = []  # (original var, +1/-1)
    for j in range(nvars):
        colmap.append((j, 1))
        if not lp.nonnegative[j]:
            colmap.append((j, -1))
    nstruct = len(colmap)
    slack_of = {}
    for i, s in enumerate(lp.senses):
        if s == LE:
            slack_of[i] = nstruct + len(slack_of)
    ncols = nstruct + len(slack_of)

    # rows start from their slack when "<=" with b >= 0, otherwise from an artificial
    signs = []
    starts = []
    needs_art = [not (s == LE and b >= 0) for s, b in zip(lp.senses, lp.rhs)]
    nart = sum(needs_art)
    width = ncols + nart + 1
    tab: list[list[Fraction]] = []
    art = ncols
    for i in range(m):
        row = [Fraction(0)] * width
        for c, (j, s) in enumerate(colmap):
            row[c] = s * lp.rows[i][j]
        if i in slack_of:
            row[slack_of[i]] = Fraction(1)
        b = lp.rhs[i]
        sgn = -1 if b < 0 else 1
        if sgn < 0:
            row = [-v for v in row]
            b = -b
        if needs_art[i]:
            row[art] = Fraction(1)
            starts.append(art)
            art += 1
        else:
            starts.append(slack_of[i])
        row[-1] = b
        signs.append(sgn)
        tab.append(row)
    basis = list(starts)

    # phase one: minimise the sum of artificials
    zrow = [Fraction(0)] * width
    for c in range(ncols, ncols + nart):
        zrow[c] = Fraction(1)
    for i, row in enumerate(tab):
        if needs_art[i]:
            zrow = [a - b for a, b in zip(zrow, row)]
    status, pivots = _simplex(tab, zrow, basis, ncols)
    phase1 = -zrow[-1]
    if phase1 > 0:
        # pi_i = cost(start_i) - reduced cost(start_i); y' = -pi solves the Farkas system
        mult = []
        for i in range(m):
            cost = 1 if needs_art[i] else 0
            mult.append(signs[i] * (zrow[starts[i]] - cost))
        return LPResult("infeasible", farkas=tuple(mult), pivots=pivots)

    # drive remaining artificials out of the basis, dropping redundant rows
    i = 0
    while i < len(tab):
        if basis[i] >= ncols:
            c = next((j for j in range(ncols) if tab[i][j] != 0), None)
            if c is None:
                del tab[i]
                del basis[i]
                continue
            _pivot(tab, zrow, basis, i, c)
        i += 1
    tab = [row[:ncols] + [row[-1]] for row in tab]

    value = None
    if lp.objective is not None:
        cost = [Fraction(0)] * ncols
        for c, (j, s) in enumerate(colmap):
            cost[c] = s * lp.objective[j]
        zrow = cost + [Fraction(0)]
        for i, bcol in enumerate(basis):
            cb = cost[bcol]
            if cb:
                zrow = [a - cb * b for a, b in zip(zrow, tab[i])]
        status, more = _simplex(tab, zrow, basis, ncols)
        pivots += more
        if status == "unbounded":
            return LPResult("unbounded", pivots=pivots)
        value = -zrow[-1]

    xcols = [Fraction(0)] * ncols
    for i, bcol in enumerate(basis):
        xcols[bcol] = tab[i][-1]
    solution = [Fraction(0)] * nvars
    for c, (j, s) in enumerate(colmap):
        solution[j] += s * xcols[c]
    return LPResult("optimal", solution=tuple(solution), value=value, pivots=pivots)


def lp_feasible(lp: LinearProgram) -> LPResult:
    """Feasibility mode: the objective is ignored, so this never reports unbounded."""
    if lp.objective is not None:
        lp = LinearProgram(lp.rows, lp.rhs, lp.senses, lp.nonnegative, None)
    return solve(lp)


def check_feasible_point(lp: LinearProgram, solution: Sequence) -> bool:
    solution = [as_fraction(v) for v in solution]
    if len(solution) != lp.num_vars:
        return False
    if any(nn and v < 0 for nn, v in zip(lp.nonnegative, solution)):
        return False
    for row, b, s in zip(lp.rows, lp.rhs, lp.senses):
        lhs = sum((a * v for a, v in zip(row, solution)), Fraction(0))
        if (s == EQ and lhs != b) or (s == LE and lhs > b):
            return False
    return True


def check_farkas(lp: LinearProgram, mult: Sequence) -> bool:
    """Verify that ``y`` proves ``lp`` infeasible."""
    mult = [as_fraction(v) for v in mult]
    if len(mult) != len(lp.rows):
        return False
    if any(s == LE and yi < 0 for s, yi in zip(lp.senses, mult)):
        return False
    for j in range(lp.num_vars):
        col = sum((yi * row[j] for yi, row in zip(mult, lp.rows)), Fraction(0))
        if lp.nonnegative[j]:
            if col < 0:
                return False
        elif col != 0:
            return False
    return sum((yi * b for yi, b in zip(mult, lp.rhs)), Fraction(0)) < 0
