"""Jacobian determinants of polynomial maps and their sign analysis."""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .linalg import int_det
from .poly import Exponent, Polynomial, PolynomialMap, is_even


class FormulaMismatchError(RuntimeError):
    """The closed-form determinant disagrees with the cofactor expansion."""


def jacobian_determinant(fmap: PolynomialMap) -> Polynomial:
    """``det JF`` as a sum over exponent tuples, one exponent per component.

    Each tuple ``(a1, ..., an)`` with ``sum(ai) >= 1`` componentwise
    contributes ``det(a1, ..., an) * prod coeffs * x**(sum(ai) - 1)``.
    """
    dim = fmap.dim
    supports = [sorted(p.terms.items()) for p in fmap]
    # suffix_max[i][k]: largest k-th entry available from components i..n-1
    suffix_max = [[0] * dim for _ in range(dim + 1)]
    for i in range(dim - 1, -1, -1):
        for k in range(dim):
            here = max((a[k] for a, _ in supports[i]), default=0)
            suffix_max[i][k] = max(here, suffix_max[i + 1][k])
    out: dict[Exponent, Fraction] = {}
    chosen: list[Exponent] = []

    def walk(i: int, running: list[int], coeff: Fraction):
        if i == dim:
            det_poly = int_det(chosen)
            if det_poly:
                mono = tuple(r - 1 for r in running)
                out[mono] = out.get(mono, Fraction(0)) + det_poly * coeff
            return
        for alpha, c in supports[i]:
            nxt = [r + a for r, a in zip(running, alpha)]
            if any(r == 0 and suffix_max[i + 1][k] == 0 for k, r in enumerate(nxt)):
                continue
            chosen.append(alpha)
            walk(i + 1, nxt, coeff * c)
            chosen.pop()

    walk(0, [0] * dim, Fraction(1))
    return Polynomial(dim, out)


def _cofactor_det(m: list[list[Polynomial]]) -> Polynomial:
    size = len(m)
    if size == 1:
        return m[0][0]
    total = Polynomial(m[0][0].dim)
    for j in range(size):
        if m[0][j].is_zero():
            continue
        minor = [row[:j] + row[j + 1:] for row in m[1:]]
        term = m[0][j] * _cofactor_det(minor)
        total = total + term if j % 2 == 0 else total - term
    return total


def jacobian_matrix(fmap: PolynomialMap) -> list[list[Polynomial]]:
    return [[p.partial_derivative(j) for j in range(1, fmap.dim + 1)] for p in fmap]


def jacobian_determinant_oracle(fmap: PolynomialMap) -> Polynomial:
    """Independent path: symbolic partials, then Laplace expansion."""
    return _cofactor_det(jacobian_matrix(fmap))


def checked_jacobian_determinant(fmap: PolynomialMap) -> Polynomial:
    det_poly = jacobian_determinant(fmap)
    if det_poly != jacobian_determinant_oracle(fmap):
        raise FormulaMismatchError("determinant formula and cofactor expansion disagree")
    return det_poly


def det_at_origin(fmap: PolynomialMap) -> Fraction:
    """``det JF(0)`` from the tuples of 0/1 exponents summing to the all-ones vector."""
    dim = fmap.dim
    candidates = [
        [(a, c) for a, c in p.terms.items() if all(point <= 1 for point in a)] for p in fmap
    ]
    total = Fraction(0)

    def walk(i, used, chosen, coeff):
        nonlocal total
        if i == dim:
            if all(used):
                total += int_det(chosen) * coeff
            return
        for alpha, c in candidates[i]:
            if any(a and u for a, u in zip(alpha, used)):
                continue
            walk(i + 1, [u or bool(a) for u, a in zip(used, alpha)], chosen + [alpha], coeff * c)

    walk(0, [False] * dim, [], Fraction(1))
    return total


# --- nonvanishing ---------------------------------------------------------

POSITIVE = "PositiveEverywhere"
NEGATIVE = "NegativeEverywhere"
ZERO = "ZeroWitness"
SIGN_CHANGE = "SignChangeWitness"
ASSERTED = "AssertedNonvanishing"
UNKNOWN = "Unknown"

NONVANISHING = (POSITIVE, NEGATIVE, ASSERTED)
VANISHING = (ZERO, SIGN_CHANGE)


@dataclass(frozen=True)
class SamplingBudget:
    diagonal_max: int = 64  # s = +-k/8, k <= diagonal_max
    diagonal_denominator: int = 8
    uniform_points: int = 500
    box: int = 10
    lines: int = 50
    line_steps: int = 40
    seed: int = 0


@dataclass(frozen=True)
class NonvanishingStatus:
    tag: str
    witness: tuple | None = None
    certificate_kind: str | None = None
    samples: int = 0
    seed: int | None = None

    @property
    def nonvanishing(self) -> bool:
        return self.tag in NONVANISHING

    @property
    def vanishing(self) -> bool:
        return self.tag in VANISHING

    def to_dict(self) -> dict:
        wit = None
        if self.witness is not None:
            wit = [{"x": [str(v) for v in point], "value": str(val)} for point, val in self.witness]
        return {
            "tag": self.tag,
            "witness": wit,
            "certificate_kind": self.certificate_kind,
            "samples": self.samples,
            "seed": self.seed,
        }


def _sign(q: Fraction) -> int:
    return (q > 0) - (q < 0)


def _diagonal_values(budget: SamplingBudget) -> list[Fraction]:
    # simplest rationals first: integers, then halves, quarters, ...
    vals = {Fraction(k, budget.diagonal_denominator) for k in range(-budget.diagonal_max, budget.diagonal_max + 1)}
    return sorted(vals, key=lambda s: (s.denominator, abs(s), s < 0))


def _sample_points(dim: int, budget: SamplingBudget):
    for s in _diagonal_values(budget):
        yield (s,) * dim
    rng = random.Random(budget.seed)
    den = budget.diagonal_denominator
    lim = budget.box * den

    def rand_point():
        return tuple(Fraction(rng.randint(-lim, lim), den) for _ in range(dim))

    for _ in range(budget.uniform_points):
        yield rand_point()
    for _ in range(budget.lines):
        base, direction = rand_point(), rand_point()
        for k in range(-budget.line_steps, budget.line_steps + 1):
            s = Fraction(k, 4)
            yield tuple(b + s * v for b, v in zip(base, direction))


def even_sign_certificate(det_poly: Polynomial) -> str | None:
    """POSITIVE/NEGATIVE when ``det_poly`` is a signed sum of even monomials with a nonzero constant."""
    const = det_poly.coefficient((0,) * det_poly.dim)
    if const == 0 or not all(is_even(a) for a in det_poly.terms):
        return None
    if all(c > 0 for c in det_poly.terms.values()):
        return POSITIVE
    if all(c < 0 for c in det_poly.terms.values()):
        return NEGATIVE
    return None


def nonvanishing_analysis(
    det_poly: Polynomial, budget: SamplingBudget | None = None, assert_nonvanishing: bool = False
) -> NonvanishingStatus:
    """Decide whether ``det_poly`` is nonzero on all of R^n, if possible.

    Falsification is by exact evaluation at deterministic rational samples.
    ``Unknown`` becomes ``AssertedNonvanishing`` only when the caller asserts it.
    """
    budget = budget or SamplingBudget()
    tag = even_sign_certificate(det_poly)
    if tag is not None:
        return NonvanishingStatus(tag, certificate_kind="even-positive-monomials", seed=budget.seed)
    if det_poly.is_zero():
        point = (Fraction(0),) * det_poly.dim
        return NonvanishingStatus(ZERO, witness=((point, Fraction(0)),), samples=1, seed=budget.seed)
    first = None
    count = 0
    for point in _sample_points(det_poly.dim, budget):
        count += 1
        v = det_poly.evaluate(point)
        if v == 0:
            return NonvanishingStatus(ZERO, witness=((point, v),), samples=count, seed=budget.seed)
        if first is None:
            first = (point, v)
        elif _sign(v) != _sign(first[1]):
            return NonvanishingStatus(SIGN_CHANGE, witness=(first, (point, v)), samples=count, seed=budget.seed)
    if assert_nonvanishing:
        return NonvanishingStatus(
            ASSERTED, certificate_kind="constant-sign-sampling-assertion", samples=count, seed=budget.seed
        )
    return NonvanishingStatus(UNKNOWN, samples=count, seed=budget.seed)


def check_witness(det_poly: Polynomial, status: NonvanishingStatus) -> bool:
    """Re-verify a zero or sign-change witness exactly."""
    if status.tag == ZERO:
        (point, _), = status.witness
        return det_poly.evaluate(point) == 0
    if status.tag == SIGN_CHANGE:
        (point, _), (other, _) = status.witness
        return _sign(det_poly.evaluate(point)) * _sign(det_poly.evaluate(other)) == -1
    return False
