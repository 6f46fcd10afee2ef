"""Newton polytope at infinity: vertices, gem membership and the V/D/R split.

Everything is decided by exact LPs from :mod:`polydiffeo.lp`. Point sets
are tuples of rationals (exponent vectors are the integer special case).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, product
from typing import Iterable, Sequence

from .linalg import affinely_independent, solve_unique
from .lp import EQ, LE, LinearProgram, lp_feasible, solve
from .poly import Exponent, Polynomial, grlex_key, sort_grlex

Point = tuple


@dataclass(frozen=True)
class HullTest:
    """Outcome of testing ``point in conv(others)``.

    ``weights`` reproduces the point when it is inside; otherwise ``farkas``
    is a row certificate for the infeasible convex-combination system.
    """

    point: Point
    others: tuple[Point, ...]
    inside: bool
    weights: tuple[Fraction, ...] | None = None
    farkas: tuple[Fraction, ...] | None = None

    def program(self) -> LinearProgram:
        return hull_program(self.point, self.others)


def hull_program(point: Sequence, others: Sequence[Sequence]) -> LinearProgram:
    dim = len(point)
    rows = [tuple(q[k] for q in others) for k in range(dim)]
    rows.append(tuple(1 for _ in others))
    rhs = list(point) + [1]
    return LinearProgram(tuple(rows), tuple(rhs), (EQ,) * (dim + 1), (True,) * len(others))


def in_hull(point: Sequence, others: Iterable[Sequence]) -> HullTest:
    point = tuple(point)
    others = tuple(tuple(q) for q in others)
    if not others:
        return HullTest(point, others, False, farkas=None)
    res = lp_feasible(hull_program(point, others))
    if res.feasible:
        return HullTest(point, others, True, weights=res.solution)
    return HullTest(point, others, False, farkas=res.farkas)


def vertex_set(points: Iterable[Sequence]) -> list[Point]:
    """Vertices of ``conv(points)``, grlex sorted."""
    pts = list(dict.fromkeys(tuple(p) for p in points))
    out = [p for p in pts if not in_hull(p, [q for q in pts if q != p]).inside]
    return sorted(out, key=grlex_key)


def _origin(dim: int) -> Exponent:
    return (0,) * dim


def _separation_certificate(alpha: Point, others: Sequence[Point], c: Sequence[int]) -> tuple[Fraction, ...]:
    """Farkas vector for :func:`hull_program` from a functional maximised only at ``alpha``."""
    top = sum(ci * ai for ci, ai in zip(c, alpha))
    gap = min(top - sum(ci * qi for ci, qi in zip(c, q)) for q in others)
    return tuple(Fraction(-ci) for ci in c) + (Fraction(top - gap),)


def vertex_tests(poly: Polynomial) -> dict[Exponent, HullTest]:
    """Hull test of every nonzero exponent against the rest of ``A_0(f)``.

    Vertices exposed by a small fixed set of integer directions are settled
    without an LP. Every other exponent is first tested against the vertices
    found so far and only then against the full remaining set.
    """
    zero = _origin(poly.dim)
    a0 = sort_grlex(set(poly.terms) | {zero})
    out: dict[Exponent, HullTest] = {}
    for c in product(range(-1, 3), repeat=poly.dim):
        if not any(c):
            continue
        values = [sum(ci * ai for ci, ai in zip(c, a)) for a in a0]
        top = max(values)
        if values.count(top) != 1:
            continue
        alpha = a0[values.index(top)]
        if alpha == zero or alpha in out:
            continue
        others = tuple(q for q in a0 if q != alpha)
        out[alpha] = HullTest(alpha, others, False, farkas=_separation_certificate(alpha, others, c))
    known = [a for a in a0 if a in out] + [zero]
    current = set(a0)
    # highest exponents first; a point found inside is dropped from later
    # tests, which leaves the hull unchanged and keeps the LPs small
    for alpha in reversed(a0):
        if alpha == zero or alpha in out:
            continue
        test = in_hull(alpha, known)
        if not test.inside:
            test = in_hull(alpha, sort_grlex(current - {alpha}))
        if test.inside:
            current.discard(alpha)
        else:
            known.append(alpha)
        out[alpha] = test
    return {alpha: out[alpha] for alpha in poly.support() if alpha in out}


def vertices_at_infinity(poly: Polynomial) -> list[Exponent]:
    """``V(f)``: vertices of ``conv(A(f) | {0})`` other than the origin."""
    return sorted((a for a, hull in vertex_tests(poly).items() if not hull.inside), key=grlex_key)


def supporting_functional(points: Iterable[Sequence], alpha: Sequence) -> tuple[Fraction, ...] | None:
    """``c`` with ``c.b <= 1`` on ``points`` and ``c.alpha == 1``, if one exists."""
    alpha = tuple(alpha)
    dim = len(alpha)
    rows = [tuple(b) for b in points if any(b)]
    lp = LinearProgram(
        tuple(rows) + (alpha,),
        (1,) * len(rows) + (1,),
        (LE,) * len(rows) + (EQ,),
        (False,) * dim,
    )
    res = lp_feasible(lp)
    return res.solution if res.feasible else None


def gem_membership(poly: Polynomial, alpha: Sequence[int]) -> bool:
    """Is ``alpha`` on some face of the Newton polytope at infinity avoiding 0?"""
    alpha = tuple(alpha)
    if not any(alpha):
        return False
    return supporting_functional(poly.terms, alpha) is not None


@dataclass(frozen=True)
class GemAnalysis:
    dimension: int
    vertices_at_infinity: tuple[Exponent, ...]
    degenerate: tuple[Exponent, ...]
    remaining: tuple[Exponent, ...]
    origin_is_vertex: bool
    vertex_evidence: dict = field(default_factory=dict, compare=False, repr=False)
    gem_evidence: dict = field(default_factory=dict, compare=False, repr=False)

    @property
    def gem_regular(self) -> bool:
        return not self.degenerate

    @property
    def vertex_set(self) -> set[Exponent]:
        return set(self.vertices_at_infinity)

    @property
    def degenerate_set(self) -> set[Exponent]:
        return set(self.degenerate)

    @property
    def remaining_set(self) -> set[Exponent]:
        return set(self.remaining)

    def to_dict(self) -> dict:
        return {
            "vertices_at_infinity": [list(a) for a in self.vertices_at_infinity],
            "degenerate": [list(a) for a in self.degenerate],
            "remaining": [list(a) for a in self.remaining],
            "origin_is_vertex": self.origin_is_vertex,
            "gem_regular": self.gem_regular,
        }


def classify_support(poly: Polynomial) -> GemAnalysis:
    """Partition ``A(f)`` into vertices at infinity, gem-degenerate and remaining exponents.

    A constant term, if present, always lands in the remaining set since no
    face of the gem contains the origin.
    """
    dim = poly.dim
    tests = vertex_tests(poly)
    verts = sorted((a for a, hull in tests.items() if not hull.inside), key=grlex_key)
    degen, rest = [], []
    gem_evidence = {}
    for alpha in poly.support():
        if alpha in tests and not tests[alpha].inside:
            continue
        # c.b <= 1 on the vertices at infinity already gives it on all of A_0
        c = supporting_functional(verts, alpha) if any(alpha) else None
        if c is None:
            rest.append(alpha)
        else:
            degen.append(alpha)
            gem_evidence[alpha] = c
    nonzero = [a for a in poly.terms if any(a)]
    origin_vertex = not in_hull(_origin(dim), nonzero).inside
    return GemAnalysis(
        dimension=dim,
        vertices_at_infinity=tuple(verts),
        degenerate=tuple(sort_grlex(degen)),
        remaining=tuple(sort_grlex(rest)),
        origin_is_vertex=origin_vertex,
        vertex_evidence=tests,
        gem_evidence=gem_evidence,
    )


def minkowski_sum_vertices(points: Iterable[Sequence]) -> list[Point]:
    """Vertices of ``conv(P) + conv(P)``, computed from all pairwise sums."""
    pts = list(dict.fromkeys(tuple(Fraction(v) for v in p) for p in points))
    if not pts:
        raise ValueError("point set must be nonempty")
    sums = {tuple(a + b for a, b in zip(p, q)) for i, p in enumerate(pts) for q in pts[i:]}
    return vertex_set(sums)


def barycentric(point: Sequence, support: Sequence[Sequence]) -> list[Fraction] | None:
    """Unique affine coordinates of ``point`` over affinely independent ``support``."""
    cols = [tuple(v) + (1,) for v in support]
    return solve_unique(cols, tuple(point) + (1,))


def is_face(subset: Sequence[Sequence], vertices: Sequence[Sequence]) -> bool:
    """Is ``conv(subset)`` a face of ``conv(vertices)`` with exactly these vertices?

    Maximises a gap ``gap`` subject to ``c.v == level`` on the subset and
    ``c.u + gap <= level`` on every other vertex; a face iff the optimum is positive.
    """
    subset = [tuple(v) for v in subset]
    others = [tuple(u) for u in vertices if tuple(u) not in set(subset)]
    if not others:
        return True
    dim = len(subset[0])
    # variables: c (dim, free), level (free), gap (free)
    rows, rhs, senses = [], [], []
    for v in subset:
        rows.append(tuple(v) + (-1, 0))
        rhs.append(0)
        senses.append(EQ)
    for u in others:
        rows.append(tuple(u) + (-1, 1))
        rhs.append(0)
        senses.append(LE)
    rows.append((0,) * (dim + 1) + (1,))
    rhs.append(1)
    senses.append(LE)
    objective = (0,) * (dim + 1) + (-1,)
    res = solve(LinearProgram(tuple(rows), tuple(rhs), tuple(senses), (False,) * (dim + 2), objective))
    return res.status == "optimal" and -res.value > 0


def simplicial_faces_through(
    poly: Polynomial, alpha: Sequence[int], vertices: Sequence[Exponent] | None = None
) -> list[tuple[Exponent, ...]]:
    """Vertex sets of the simplicial faces in the gem that contain ``alpha``."""
    alpha = tuple(alpha)
    dim = poly.dim
    verts = list(vertices) if vertices is not None else vertices_at_infinity(poly)
    with_origin = verts + [_origin(dim)]
    found = []
    for k in range(1, dim + 1):
        for subset in combinations(verts, k):
            if not affinely_independent(subset):
                continue
            lam = barycentric(alpha, subset)
            if lam is None or any(val < 0 for val in lam):
                continue
            if is_face(subset, with_origin):
                found.append(tuple(sort_grlex(subset)))
    return sorted(set(found), key=lambda s: (len(s), [grlex_key(v) for v in s]))
