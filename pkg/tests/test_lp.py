from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from polydiffeo.lp import EQ, LE, LinearProgram, check_farkas, check_feasible_point, lp_feasible, solve


def functional_system(alpha):
    # c.(6,0) <= 1, c.(0,6) <= 1, c.alpha == 1 with c free
    return LinearProgram(((6, 0), (0, 6), alpha), (1, 1, 1), (LE, LE, EQ), (False, False))


def test_feasible_functional():
    lp = functional_system((3, 3))
    res = lp_feasible(lp)
    assert res.feasible
    assert check_feasible_point(lp, res.solution)
    assert check_feasible_point(lp, (Fraction(1, 6), Fraction(1, 6)))


def test_infeasible_functional_has_certificate():
    lp = functional_system((3, 1))
    res = lp_feasible(lp)
    assert not res.feasible
    assert check_farkas(lp, res.farkas)


def test_contradictory_equalities():
    lp = LinearProgram(((1,), (1,)), (1, 2), (EQ, EQ), (False,))
    res = lp_feasible(lp)
    assert res.status == "infeasible"
    assert check_farkas(lp, res.farkas)


def test_optimum_and_unbounded():
    # max x + y s.t. x + 2y <= 4, 3x + y <= 6
    lp = LinearProgram(((1, 2), (3, 1)), (4, 6), (LE, LE), objective=(-1, -1))
    res = solve(lp)
    assert res.status == "optimal"
    assert res.solution == (Fraction(8, 5), Fraction(6, 5))
    assert res.value == Fraction(-14, 5)
    unbounded = LinearProgram(((1, -1),), (1,), (LE,), objective=(-1, 0))
    assert solve(unbounded).status == "unbounded"
    # feasibility mode never reports unbounded
    assert lp_feasible(unbounded).status == "optimal"


def test_redundant_equalities_are_dropped():
    lp = LinearProgram(((1, 1), (2, 2)), (1, 2), (EQ, EQ), objective=(1, 0))
    res = solve(lp)
    assert res.status == "optimal" and res.value == 0
    assert check_feasible_point(lp, res.solution)


def test_shape_validation():
    with pytest.raises(ValueError):
        LinearProgram(((1, 2),), (1, 2), (LE,))
    with pytest.raises(ValueError):
        LinearProgram(((1, 2),), (1,), ("<",))
    with pytest.raises(TypeError):
        LinearProgram(((0.5, 2),), (1,), (LE,))


def test_checkers_reject_bad_claims():
    lp = functional_system((3, 3))
    assert not check_feasible_point(lp, (1, 0))
    assert not check_farkas(lp, (0, 0, 0))


small = st.integers(-4, 4)


@settings(max_examples=120, deadline=None)
@given(
    st.integers(1, 4).flatmap(
        lambda m: st.tuples(
            st.lists(st.lists(small, min_size=3, max_size=3), min_size=m, max_size=m),
            st.lists(small, min_size=m, max_size=m),
            st.lists(st.sampled_from([LE, EQ]), min_size=m, max_size=m),
            st.lists(st.booleans(), min_size=3, max_size=3),
        )
    )
)
def test_every_answer_is_certified(data):
    rows, rhs, senses, nonneg = data
    lp = LinearProgram(tuple(map(tuple, rows)), tuple(rhs), tuple(senses), tuple(nonneg))
    res = lp_feasible(lp)
    if res.feasible:
        assert check_feasible_point(lp, res.solution)
    else:
        assert check_farkas(lp, res.farkas)
