"""Coercivity and global-diffeomorphism verdicts.

The map ``F`` is a global C1-diffeomorphism of R^n exactly when ``det JF``
never vanishes and ``||F||^2`` is coercive. The first half is settled in
:mod:`polydiffeo.jacobian`; this module settles the second from the
Newton polytope at infinity of ``||F||^2`` and combines both.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from math import gcd
from typing import Iterator, Mapping

from .circuits import (
    NecessaryVerdict,
    SufficientResult,
    necessary_condition_check,
    sufficient_condition_check,
)
from .conditions import ConditionsReport, check_conditions
from .geometry import GemAnalysis, classify_support
from .jacobian import (
    ASSERTED,
    NONVANISHING,
    UNKNOWN,
    NonvanishingStatus,
    SamplingBudget,
    checked_jacobian_determinant,
    nonvanishing_analysis,
)
from .linalg import RationalMatrix
from .poly import Exponent, Polynomial, PolynomialMap, compose_linear, sos

COERCIVE = "Coercive"
NOT_COERCIVE = "NotCoercive"

DIFFEOMORPHISM = "Diffeomorphism"
NOT_DIFFEOMORPHISM = "NotDiffeomorphism"

CHARACTERIZATION = "characterization"
SUFFICIENT = "sufficient"
NECESSARY_VIOLATION = "necessary-violation"
NONE = "none"

__all__ = [
    "check_conditions",
    "ConditionsReport",
    "CoercivityVerdict",
    "DiffeoReport",
    "Options",
    "coercivity_verdict",
    "diffeomorphism_verdict",
    "transform_family",
    "transform_search",
]


@dataclass
class CoercivityVerdict:
    tag: str
    theorem_used: str
    polynomial: Polynomial
    gem: GemAnalysis
    conditions: ConditionsReport
    necessary: NecessaryVerdict | None = None
    sufficient: SufficientResult | None = None
    notes: list = field(default_factory=list)

    @property
    def coercive(self) -> bool:
        return self.tag == COERCIVE

    def to_dict(self) -> dict:
        return {
            "tag": self.tag,
            "theorem_used": self.theorem_used,
            "polynomial": self.polynomial.to_text(),
            "gem": self.gem.to_dict(),
            "conditions": self.conditions.to_dict(),
            "necessary": self.necessary.to_dict() if self.necessary else None,
            "sufficient": self.sufficient.to_dict() if self.sufficient else None,
            "notes": list(self.notes),
        }


def coercivity_verdict(
    poly: Polynomial,
    weights: Mapping[Exponent, Fraction] | None = None,
    weight_strategy: str = "default",
) -> CoercivityVerdict:
    """Decide coercivity of ``f`` where the vertex theorems allow it.

    Order of tests: the three vertex conditions (necessary), gem regularity
    (then the conditions characterise coercivity), the circuit-number
    necessary inequalities, and finally the weighted sufficient inequalities.
    Anything left over is ``Unknown``. Constants, the zero polynomial
    included, have no axis vertex and come out ``NotCoercive``.
    """
    gem = classify_support(poly)
    cond = check_conditions(poly, gem)
    if not cond.all_hold:
        clause, items = cond.first_failure()
        nec = NecessaryVerdict(False, clause, {"items": items}, cond)
        return CoercivityVerdict(NOT_COERCIVE, NECESSARY_VIOLATION, poly, gem, cond, nec,
                                 notes=[f"condition {clause} fails"])
    if gem.gem_regular:
        return CoercivityVerdict(COERCIVE, CHARACTERIZATION, poly, gem, cond)
    nec = necessary_condition_check(poly, gem)
    notes = []
    if nec.inapplicable:
        notes.append("necessary conditions inapplicable for " + ", ".join(str(list(a)) for a in nec.inapplicable))
    if not nec.passed:
        return CoercivityVerdict(NOT_COERCIVE, NECESSARY_VIOLATION, poly, gem, cond, nec, notes=notes)
    suff = sufficient_condition_check(poly, gem, weights, weight_strategy)
    if suff.passed:
        return CoercivityVerdict(COERCIVE, SUFFICIENT, poly, gem, cond, nec, suff, notes)
    return CoercivityVerdict(UNKNOWN, NONE, poly, gem, cond, nec, suff, notes)


# --- linear transforms ----------------------------------------------------

def _normalize_columns(rows: tuple[tuple[int, ...], ...]) -> tuple[tuple[int, ...], ...]:
    """Divide each column by its content and make its first nonzero entry positive."""
    dim = len(rows)
    cols = []
    for col in zip(*rows):
        content = 0
        for v in col:
            content = gcd(content, v)
        lead = next(v for v in col if v)
        content = content if lead > 0 else -content
        cols.append([v // content for v in col])
    return tuple(tuple(cols[j][i] for j in range(dim)) for i in range(dim))


def transform_family(dim: int, bound: int = 1) -> Iterator[RationalMatrix]:
    """Regular integer matrices with entries in ``[-bound, bound]``.

    Identity first, then by sum of absolute entries and reverse-lexicographically
    (positive entries before negative ones). Matrices whose columns differ
    only by nonzero scalars are yielded once, in normalised form.
    """
    identity = RationalMatrix.identity(dim)
    seen = {_normalize_columns(tuple(tuple(int(v) for v in r) for r in identity.rows))}
    yield identity
    candidates = sorted(
        (tuple(tuple(flat[i * dim:(i + 1) * dim]) for i in range(dim))
         for flat in product(range(-bound, bound + 1), repeat=dim * dim)),
        key=lambda r: (sum(abs(v) for row in r for v in row), tuple(-v for row in r for v in row)),
    )
    for rows in candidates:
        if any(not any(col) for col in zip(*rows)):
            continue
        key = _normalize_columns(rows)
        if key in seen:
            continue
        seen.add(key)
        m = RationalMatrix(key)
        if m.is_regular():
            yield m


@dataclass
class TransformHit:
    matrix: RationalMatrix
    verdict: CoercivityVerdict
    tried: int

    def to_dict(self) -> dict:
        return {
            "inverse_matrix": self.matrix.to_lists(),
            "tried": self.tried,
            "verdict": self.verdict.to_dict(),
        }


def transform_search(
    fmap: PolynomialMap,
    bound: int = 1,
    budget: int | None = None,
    weights_strategy: str = "default",
) -> tuple[TransformHit | None, int]:
    """Try ``F o inverse`` for ``inverse`` in :func:`transform_family`.

    Returns the first hit whose squared norm is certified coercive (which
    transfers to ``||F||^2``) and the number of matrices tried. Only meant
    for maps whose own squared norm is undecided: the identity comes first
    and a decided verdict there raises ``ValueError``.
    """
    tried = 0
    for inverse in transform_family(fmap.dim, bound):
        if budget is not None and tried >= budget:
            break
        tried += 1
        poly = sos(compose_linear(fmap, inverse))
        v = coercivity_verdict(poly, weight_strategy=weights_strategy)
        if tried == 1 and v.tag != UNKNOWN:
            raise ValueError(f"coercivity of ||F||^2 is already decided ({v.tag})")
        if v.coercive:
            return TransformHit(inverse, v, tried), tried
    return None, tried


# --- diffeomorphism -------------------------------------------------------

@dataclass(frozen=True)
class Options:
    transforms: bool = False
    transform_bound: int = 1
    transform_budget: int | None = None
    weights: str = "default"
    assert_nonvanishing: bool = False
    sampling: SamplingBudget = SamplingBudget()

    def to_dict(self) -> dict:
        return {
            "transforms": self.transforms,
            "transform_bound": self.transform_bound,
            "transform_budget": self.transform_budget,
            "weights": self.weights,
            "assert_nonvanishing": self.assert_nonvanishing,
            "samples": self.sampling.uniform_points,
            "seed": self.sampling.seed,
        }


@dataclass
class DiffeoReport:
    verdict: str
    h1: NonvanishingStatus
    h2: CoercivityVerdict
    determinant: Polynomial
    transform: TransformHit | None = None
    transforms_tried: int = 0
    notes: list = field(default_factory=list)

    @property
    def coercivity_tag(self) -> str:
        return COERCIVE if self.transform is not None else self.h2.tag

    def to_dict(self) -> dict:
        return {
            "verdict": self.verdict,
            "jacobian_determinant": self.determinant.to_text(),
            "h1": self.h1.to_dict(),
            "h2": self.h2.to_dict(),
            "coercivity": self.coercivity_tag,
            "transform": self.transform.to_dict() if self.transform else None,
            "transforms_tried": self.transforms_tried,
            "notes": list(self.notes),
        }


def diffeomorphism_verdict(fmap: PolynomialMap, options: Options | None = None) -> DiffeoReport:
    """Combine the Jacobian and coercivity analyses into one verdict.

    ``NotDiffeomorphism`` needs an exact zero or sign change of ``det JF``,
    or a violated necessary condition for coercivity of ``||F||^2``;
    ``Diffeomorphism`` needs both halves settled positively.
    """
    options = options or Options()
    det_poly = checked_jacobian_determinant(fmap)
    h1 = nonvanishing_analysis(det_poly, options.sampling, options.assert_nonvanishing)
    poly = sos(fmap)
    h2 = coercivity_verdict(poly, weight_strategy=options.weights)
    report = DiffeoReport(UNKNOWN, h1, h2, det_poly)
    if h1.tag == ASSERTED:
        report.notes.append("nonvanishing of det JF asserted by the caller, not proven")

    if h2.tag == UNKNOWN and options.transforms:
        hit, tried = transform_search(fmap, options.transform_bound, options.transform_budget, options.weights)
        report.transform = hit
        report.transforms_tried = tried
        if hit is None:
            report.notes.append(f"transform search exhausted after {tried} matrices")
        else:
            report.notes.append("coercivity of the transformed squared norm transfers to ||F||^2")

    if h1.vanishing:
        report.verdict = NOT_DIFFEOMORPHISM
        report.notes.append("det JF vanishes somewhere")
    elif report.coercivity_tag == NOT_COERCIVE:
        report.verdict = NOT_DIFFEOMORPHISM
        report.notes.append("||F||^2 is not coercive, so F is not proper")
    elif h1.tag in NONVANISHING and report.coercivity_tag == COERCIVE:
        report.verdict = DIFFEOMORPHISM
    return report
