"""Circuit numbers and the coercivity inequalities for gem-degenerate exponents.

The circuit number of ``alpha*`` over affinely independent vertices ``V*``
with barycentric weights ``lam`` is ``prod (f_a / lam_a) ** lam_a``. It is
generally irrational, so it is never evaluated as a real for a decision:
with ``lcm`` the least common multiple of the weight denominators,
``Theta ** lcm`` is an exact rational (the *power form*) and every inequality
``|c| < weight * Theta`` is decided by raising both sides to the power
``lcm`` after a sign check.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Mapping, Sequence

from .conditions import ConditionsReport, check_conditions
from .geometry import GemAnalysis, barycentric, simplicial_faces_through
from .linalg import affinely_independent
from .poly import Exponent, Polynomial, grlex_key, is_even


@dataclass(frozen=True)
class CaratheodoryDecomposition:
    alpha_star: Exponent
    support: tuple[Exponent, ...]
    lambdas: tuple[Fraction, ...]
    minimal: bool = True

    def __post_init__(self):
        if len(self.support) != len(self.lambdas):
            raise ValueError("support and lambdas differ in length")
        if sum(self.lambdas) != 1 or any(share < 0 for share in self.lambdas):
            raise ValueError("lambdas must be nonnegative and sum to 1")

    def reconstruct(self) -> tuple[Fraction, ...]:
        dim = len(self.alpha_star)
        return tuple(
            sum((share * v[k] for share, v in zip(self.lambdas, self.support)), Fraction(0)) for k in range(dim)
        )

    def to_dict(self) -> dict:
        return {
            "alpha_star": list(self.alpha_star),
            "support": [list(v) for v in self.support],
            "lambdas": [str(share) for share in self.lambdas],
            "minimal": self.minimal,
        }


def caratheodory_decompose(alpha_star: Sequence[int], vertices: Sequence[Exponent]) -> list[CaratheodoryDecomposition]:
    """All minimal affinely independent ``V* <= V`` with ``alpha*`` in ``conv V*``.

    For an affinely independent support, minimality is equivalent to every
    barycentric weight being strictly positive.
    """
    alpha_star = tuple(alpha_star)
    pts = sorted({tuple(v) for v in vertices}, key=grlex_key)
    dim = len(alpha_star)
    found = []
    for k in range(1, min(dim + 1, len(pts)) + 1):
        for subset in combinations(pts, k):
            if not affinely_independent(subset):
                continue
            lam = barycentric(alpha_star, subset)
            if lam is None or any(share <= 0 for share in lam):
                continue
            found.append(CaratheodoryDecomposition(alpha_star, subset, tuple(lam), True))
    if not found:
        raise ValueError(f"{alpha_star} is not in the convex hull of the given vertices")
    return found


def _log(q: Fraction) -> float:
    return math.log(q.numerator) - math.log(q.denominator)


@dataclass(frozen=True)
class CircuitNumber:
    decomposition: CaratheodoryDecomposition
    lcm: int
    power_form: Fraction
    float_hint: float

    def to_dict(self) -> dict:
        return {
            "decomposition": self.decomposition.to_dict(),
            "lcm": self.lcm,
            "power_form": str(self.power_form),
            "float_hint": self.float_hint,
        }


def circuit_number(poly: Polynomial, decomp: CaratheodoryDecomposition) -> CircuitNumber:
    """Exact ``Theta ** N``; zero weights contribute a factor ``0**0 = 1``."""
    active = [(v, share) for v, share in zip(decomp.support, decomp.lambdas) if share > 0]
    for v, _ in active:
        if poly.coefficient(v) <= 0:
            raise ValueError(f"coefficient at {v} is not positive")
    lcm = 1
    for _, share in active:
        lcm = lcm * share.denominator // math.gcd(lcm, share.denominator)
    power = Fraction(1)
    log_theta = 0.0
    for v, share in active:
        ratio = poly.coefficient(v) / share
        power *= ratio ** int(share * lcm)
        log_theta += float(share) * _log(ratio)
    return CircuitNumber(decomp, lcm, power, math.exp(log_theta))


def theta_compare(value: Fraction, weight: Fraction, cert: CircuitNumber) -> int:
    """Sign of ``value - weight * Theta`` for ``weight > 0``, decided exactly."""
    value = Fraction(value)
    if value <= 0:
        return -1
    lhs = value ** cert.lcm
    rhs = Fraction(weight) ** cert.lcm * cert.power_form
    return (lhs > rhs) - (lhs < rhs)


def sufficient_inequality(poly: Polynomial, cert: CircuitNumber, weight, alpha_star_even: bool) -> bool:
    """``coeff > -weight * Theta`` for an even ``alpha*``, ``|coeff| < weight * Theta`` otherwise."""
    weight = Fraction(weight)
    if weight <= 0:
        raise ValueError("weight must be positive")
    c = poly.coefficient(cert.decomposition.alpha_star)
    if alpha_star_even:
        return c >= 0 or theta_compare(-c, weight, cert) < 0
    return theta_compare(abs(c), weight, cert) < 0


def required_weight(poly: Polynomial, cert: CircuitNumber, alpha_star_even: bool) -> float:
    """Approximate infimum of weights passing :func:`sufficient_inequality`."""
    c = poly.coefficient(cert.decomposition.alpha_star)
    if alpha_star_even and c >= 0:
        return 0.0
    return float(abs(c)) / cert.float_hint


# --- necessary conditions -------------------------------------------------

@dataclass
class NecessaryVerdict:
    passed: bool
    clause: str | None = None
    witness: dict | None = None
    conditions: ConditionsReport | None = None
    checked: list = field(default_factory=list)
    inapplicable: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "passed": self.passed,
            "clause": self.clause,
            "witness": self.witness,
            "checked": self.checked,
            "inapplicable": [list(a) for a in self.inapplicable],
        }


def _in_conv(point: Exponent, support: Sequence[Exponent]) -> bool:
    lam = barycentric(point, support)
    return lam is not None and all(share >= 0 for share in lam)


def necessary_condition_check(poly: Polynomial, gem: GemAnalysis) -> NecessaryVerdict:
    """Look for a violated necessary condition for coercivity.

    A pass is not a proof of coercivity. Degenerate exponents that share
    every simplicial face with another degenerate exponent cannot be
    tested and are listed in ``inapplicable``.
    """
    cond = check_conditions(poly, gem)
    failure = cond.first_failure()
    if failure is not None:
        clause, items = failure
        key = "missing_axes" if clause == "C3" else "vertices"
        return NecessaryVerdict(False, clause, {key: items}, cond)
    verdict = NecessaryVerdict(True, conditions=cond)
    degenerate = list(gem.degenerate)
    vertices = list(gem.vertices_at_infinity)
    for alpha in degenerate:
        faces = [
            face
            for face in simplicial_faces_through(poly, alpha, vertices)
            if not any(_in_conv(delta, face) for delta in degenerate if delta != alpha)
        ]
        if not faces:
            verdict.inapplicable.append(alpha)
            continue
        c = poly.coefficient(alpha)
        for face in faces:
            lam = barycentric(alpha, face)
            decomp = CaratheodoryDecomposition(alpha, face, tuple(lam), all(share > 0 for share in lam))
            cert = circuit_number(poly, decomp)
            lower_ok = c >= 0 or theta_compare(-c, 1, cert) <= 0
            upper_ok = True if is_even(alpha) else (c <= 0 or theta_compare(c, 1, cert) <= 0)
            record = {
                "alpha_star": list(alpha),
                "face": [list(v) for v in face],
                "coefficient": str(c),
                "circuit": cert.to_dict(),
                "lower_bound_holds": lower_ok,
                "upper_bound_holds": upper_ok,
            }
            verdict.checked.append(record)
            if not (lower_ok and upper_ok):
                verdict.passed = False
                verdict.clause = "IrregC1" if not lower_ok else "IrregC2"
                verdict.witness = record
                return verdict
    return verdict


# --- sufficient conditions ------------------------------------------------

@dataclass
class SufficientResult:
    passed: bool
    weights: dict
    certificates: dict  # alpha* -> (CircuitNumber, passed)
    failing: list

    def to_dict(self) -> dict:
        return {
            "passed": self.passed,
            "weights": {",".join(map(str, a)): str(weight) for a, weight in sorted(self.weights.items())},
            "certificates": [
                {"alpha_star": list(a), "circuit": cert.to_dict(), "holds": ok}
                for a, (cert, ok) in sorted(self.certificates.items())
            ],
            "failing": [list(a) for a in self.failing],
        }


def default_weights(degenerate: Sequence[Exponent]) -> dict[Exponent, Fraction]:
    if not degenerate:
        return {}
    return {a: Fraction(1, len(degenerate)) for a in degenerate}


def validate_weights(weights: Mapping[Exponent, Fraction], degenerate: Sequence[Exponent]):
    missing = [a for a in degenerate if a not in weights]
    if missing:
        raise ValueError(f"no weight for degenerate exponents {missing}")
    if any(Fraction(weights[a]) <= 0 for a in degenerate):
        raise ValueError("weights must be positive")
    if sum((Fraction(weights[a]) for a in degenerate), Fraction(0)) > 1:
        raise ValueError("weights must sum to at most 1")


def _try_weights(poly, degenerate, certs_by_alpha, weights) -> SufficientResult:
    chosen = {}
    failing = []
    for alpha in degenerate:
        even = is_even(alpha)
        hit = None
        for cert in certs_by_alpha[alpha]:
            if sufficient_inequality(poly, cert, weights[alpha], even):
                hit = cert
                break
        if hit is None:
            failing.append(alpha)
            chosen[alpha] = (certs_by_alpha[alpha][0], False)
        else:
            chosen[alpha] = (hit, True)
    return SufficientResult(not failing, dict(weights), chosen, failing)


def sufficient_condition_check(
    poly: Polynomial,
    gem: GemAnalysis,
    weights: Mapping[Exponent, Fraction] | None = None,
    strategy: str = "default",
) -> SufficientResult:
    """Search for circuit certificates for every degenerate exponent.

    Any minimal decomposition passing its inequality is accepted. With
    ``strategy="proportional"`` a failed equal split is retried once with
    weights moved towards the exponents that need them.
    """
    degenerate = list(gem.degenerate)
    vertices = list(gem.vertices_at_infinity)
    certs = {a: [circuit_number(poly, decomp) for decomp in caratheodory_decompose(a, vertices)] for a in degenerate}
    if weights is not None:
        weights = {tuple(a): Fraction(weight) for a, weight in weights.items()}
        validate_weights(weights, degenerate)
        return _try_weights(poly, degenerate, certs, weights)
    first = _try_weights(poly, degenerate, certs, default_weights(degenerate))
    if first.passed or strategy != "proportional":
        return first
    demand = {a: min(required_weight(poly, c, is_even(a)) for c in certs[a]) for a in degenerate}
    slack = 1.0 - sum(demand.values())
    if slack <= 0:
        return first
    trial = {a: Fraction(demand[a] + slack / len(degenerate)).limit_denominator(10**9) for a in degenerate}
    total = sum(trial.values(), Fraction(0))
    if total > 1:
        trial = {a: weight / total for a, weight in trial.items()}
    if any(weight <= 0 for weight in trial.values()):
        return first
    second = _try_weights(poly, degenerate, certs, trial)
    return second if second.passed else first
