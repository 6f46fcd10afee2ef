from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from polydiffeo.linalg import RationalMatrix
from polydiffeo.poly import (
    DimensionError,
    Polynomial,
    PolynomialMap,
    PolynomialSyntaxError,
    compose_linear,
    evaluate,
    multiply,
    parse_polynomial,
    partial_derivative,
    sos,
)

from conftest import maps, polynomials

Q = Fraction


def parse2(text, dim=2):
    return parse_polynomial(text, dim)


def test_parse_family_component():
    poly = parse2("x1 + x1^3 - 1*x2^3")
    assert dict(poly.terms) == {(1, 0): 1, (3, 0): 1, (0, 3): -1}


def test_parse_zero_and_cancellation():
    assert parse2("0", 3).is_zero()
    assert dict(parse2("2*x1*x2 - x1*x2 - x1*x2").terms) == {}


def test_parse_grammar_variants():
    assert parse2("2*x1^3*x2 - 1/2*x2^6 + 3") == parse2("3 + 2 x1^3 x2 - 1/2 x2^6")
    assert parse2("x1x2") == parse2("x1*x2")
    assert parse2("(-3/2)*x1") == parse2("-3/2*x1")
    assert parse2("- -x1") == parse2("x1")
    assert parse2("2^3*x1") == parse2("8*x1")


@pytest.mark.parametrize(
    "text,pos",
    [("x1 + x3", 5), ("x1 + ", 5), ("x1 ** 2", 4), ("x1 $ x2", 3), ("", 0), ("1/2^2", 3), ("x1^-1", 3)],
)
def test_parse_errors_carry_position(text, pos):
    with pytest.raises(PolynomialSyntaxError) as err:
        parse2(text)
    assert err.value.position == pos


def test_parse_rejects_zero_dimension():
    with pytest.raises(DimensionError):
        parse_polynomial("1", 0)


def test_evaluate_examples():
    f1 = parse2("2*x1^6 + 2*x2^6 + 2*x1^4 + 2*x2^4 + 2*x1^3*x2 - 2*x1*x2^3 + x1^2 + x2^2")
    assert evaluate(f1, (1, 1)) == 10
    assert evaluate(parse2("x1^2*x2"), (2, 3)) == 12
    assert evaluate(parse2("x1^2 + 7/3"), (0, 0)) == Q(7, 3)
    with pytest.raises(DimensionError):
        evaluate(f1, (1,))


def test_multiply_examples():
    s = parse2("x1 + x2")
    assert multiply(s, s) == parse2("x1^2 + 2*x1*x2 + x2^2")
    assert multiply(parse2("x1 - x2"), s) == parse2("x1^2 - x2^2")
    assert (1, 1) not in multiply(parse2("x1 - x2"), s).terms
    assert multiply(s, Polynomial.constant(2, 1)) == s


def test_sos_examples(ft):
    expected = parse2("2*x1^6 + 2*x2^6 + 2*x1^4 + 2*x2^4 + 2*x1^3*x2 - 2*x1*x2^3 + x1^2 + x2^2")
    assert sos(ft(1)) == expected
    for param in (Q(0), Q(-3, 2), Q(5)):
        poly = sos(ft(param))
        assert poly.coefficient((3, 3)) == 2 * (1 - param)
        assert poly.coefficient((0, 6)) == 1 + param * param
    assert sos(PolynomialMap.parse(["x1", "x2"])) == parse2("x1^2 + x2^2")


def test_sos_fixture_matches(ft, ft_sos):
    for param in (Q(-2), Q(0), Q(7, 3)):
        assert sos(ft(param)) == ft_sos(param)


def test_compose_linear_examples(ft):
    inverse = RationalMatrix([[1, 1], [1, -1]])
    got = sos(compose_linear(ft(-1), inverse))
    assert got == parse2("2*x1^2 + 2*x2^2 + 8*x1^4 + 24*x1^2*x2^2 + 8*x1^6 + 48*x1^4*x2^2 + 72*x1^2*x2^4")
    fmap = ft(3)
    assert compose_linear(fmap, RationalMatrix.identity(2)) == fmap
    scaled = compose_linear(PolynomialMap.parse(["x1", "x2"]), RationalMatrix([[2, 0], [0, 2]]))
    assert scaled.to_texts() == ["2*x1", "2*x2"]


def test_compose_linear_rejects_bad_matrices(ft):
    with pytest.raises(ValueError):
        compose_linear(ft(1), RationalMatrix([[1, 1], [1, 1]]))
    with pytest.raises(DimensionError):
        compose_linear(ft(1), RationalMatrix.identity(3))


def test_partial_derivative_examples():
    assert partial_derivative(parse2("x1^3*x2"), 1) == parse2("3*x1^2*x2")
    assert partial_derivative(parse2("x1^3"), 2).is_zero()
    assert partial_derivative(parse2("x1 + x1^3 - x2^3"), 1) == parse2("1 + 3*x1^2")
    with pytest.raises(DimensionError):
        partial_derivative(parse2("x1"), 3)


def test_text_round_trip_and_ordering():
    poly = parse2("x2^2 + 2*x1^6 - 1/2*x1*x2 + 3")
    assert poly.to_text() == "2*x1^6 - 1/2*x1*x2 + x2^2 + 3"
    assert parse2(poly.to_text()) == poly
    assert Polynomial(2).to_text() == "0"


def test_polynomial_map_must_be_square():
    with pytest.raises(DimensionError):
        PolynomialMap((parse2("x1"),))


@settings(max_examples=60, deadline=None)
@given(polynomials(), polynomials(), polynomials())
def test_ring_axioms(poly, other, third):
    assert poly * other == other * poly
    assert poly * (other + third) == poly * other + poly * third
    assert (poly + other) - other == poly
    assert (poly * other) * third == poly * (other * third)
    assert all(c != 0 for c in (poly * other - other * third).terms.values())


@settings(max_examples=60, deadline=None)
@given(polynomials(), st.tuples(*[st.fractions(-3, 3, max_denominator=4)] * 2))
def test_text_round_trip_property(poly, pt):
    other = parse2(poly.to_text())
    assert other == poly
    assert other.evaluate(pt) == poly.evaluate(pt)


@settings(max_examples=40, deadline=None)
@given(maps(), st.tuples(*[st.fractions(-3, 3, max_denominator=4)] * 2))
def test_sos_agrees_with_evaluation(fmap, pt):
    assert sos(fmap).evaluate(pt) == sum(v * v for v in fmap.evaluate(pt))


@settings(max_examples=40, deadline=None)
@given(
    maps(),
    st.lists(st.integers(-2, 2), min_size=4, max_size=4),
    st.tuples(*[st.fractions(-3, 3, max_denominator=3)] * 2),
)
def test_compose_linear_agrees_with_evaluation(fmap, entries, ypt):
    M = RationalMatrix([entries[:2], entries[2:]])
    if not M.is_regular():
        return
    hmap = compose_linear(fmap, M)
    assert hmap.evaluate(ypt) == fmap.evaluate(M.apply(ypt))


@settings(max_examples=40, deadline=None)
@given(polynomials(max_terms=5))
def test_square_support_inside_pairwise_sums(poly):
    sums = {tuple(a + b for a, b in zip(p, q)) for p in poly.terms for q in poly.terms}
    assert set((poly * poly).terms) <= sums
