"""The three vertex conditions used by every coercivity test.

* even: every vertex at infinity has only even entries
* positive: every vertex at infinity carries a positive coefficient
* axes: each coordinate axis holds a vertex ``2k e_i`` with ``k >= 1``
"""

from __future__ import annotations

from dataclasses import dataclass

from .geometry import GemAnalysis
from .poly import Exponent, Polynomial, is_even


@dataclass(frozen=True)
class ConditionsReport:
    c1_holds: bool
    c1_violations: tuple[Exponent, ...]
    c2_holds: bool
    c2_violations: tuple[Exponent, ...]
    c3_holds: bool
    c3_axis_vertices: dict  # 1-based axis -> vertex 2k e_i
    c3_missing_axes: tuple[int, ...]

    @property
    def all_hold(self) -> bool:
        return self.c1_holds and self.c2_holds and self.c3_holds

    def first_failure(self) -> tuple[str, object] | None:
        if not self.c1_holds:
            return "C1", list(self.c1_violations)
        if not self.c2_holds:
            return "C2", list(self.c2_violations)
        if not self.c3_holds:
            return "C3", list(self.c3_missing_axes)
        return None

    def to_dict(self) -> dict:
        return {
            "c1": {"holds": self.c1_holds, "violating": [list(a) for a in self.c1_violations]},
            "c2": {"holds": self.c2_holds, "violating": [list(a) for a in self.c2_violations]},
            "c3": {
                "holds": self.c3_holds,
                "axis_vertices": {str(i): list(v) for i, v in sorted(self.c3_axis_vertices.items())},
                "missing_axes": list(self.c3_missing_axes),
            },
        }


def _axis(alpha: Exponent) -> int | None:
    nonzero = [i for i, a in enumerate(alpha) if a]
    if len(nonzero) == 1 and alpha[nonzero[0]] % 2 == 0:
        return nonzero[0] + 1
    return None


def check_conditions(poly: Polynomial, gem: GemAnalysis) -> ConditionsReport:
    vertices = gem.vertices_at_infinity
    c1_bad = tuple(a for a in vertices if not is_even(a))
    c2_bad = tuple(a for a in vertices if poly.coefficient(a) <= 0)
    axes = {}
    for a in vertices:
        i = _axis(a)
        if i is not None:
            axes.setdefault(i, a)
    missing = tuple(i for i in range(1, poly.dim + 1) if i not in axes)
    return ConditionsReport(
        c1_holds=not c1_bad,
        c1_violations=c1_bad,
        c2_holds=not c2_bad,
        c2_violations=c2_bad,
        c3_holds=not missing,
        c3_axis_vertices=axes,
        c3_missing_axes=missing,
    )
