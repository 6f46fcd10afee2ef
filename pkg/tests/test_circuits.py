import math
import random
from fractions import Fraction

import mpmath
import pytest

from polydiffeo.circuits import (
    CaratheodoryDecomposition,
    caratheodory_decompose,
    circuit_number,
    necessary_condition_check,
    sufficient_condition_check,
    sufficient_inequality,
    theta_compare,
)
from polydiffeo.geometry import classify_support
from polydiffeo.linalg import RationalMatrix
from polydiffeo.poly import Polynomial, compose_linear, parse_polynomial, sos

Q = Fraction


def half_split(alpha, a, b):
    return CaratheodoryDecomposition(alpha, (a, b), (Q(1, 2), Q(1, 2)))


def test_decompositions():
    (decomp,) = caratheodory_decompose((3, 3), [(6, 0), (0, 6)])
    assert decomp.lambdas == (Q(1, 2), Q(1, 2)) and decomp.minimal
    (decomp,) = caratheodory_decompose((4, 2), [(6, 0), (2, 4), (0, 2)])
    assert set(decomp.support) == {(6, 0), (2, 4)}
    assert decomp.reconstruct() == (4, 2)
    (decomp,) = caratheodory_decompose((6, 0), [(6, 0), (2, 4), (0, 2)])
    assert decomp.support == ((6, 0),) and decomp.lambdas == (1,)
    with pytest.raises(ValueError):
        caratheodory_decompose((7, 7), [(6, 0), (0, 6)])


def test_decomposition_invariants_enforced():
    with pytest.raises(ValueError):
        CaratheodoryDecomposition((1, 1), ((2, 0), (0, 2)), (Q(1, 2), Q(1, 3)))


def test_decompositions_reconstruct_on_a_square():
    verts = [(4, 0), (0, 4), (4, 4), (0, 0), (2, 6)]
    for decomp in caratheodory_decompose((2, 2), verts):
        assert decomp.reconstruct() == (2, 2)
        assert all(share > 0 for share in decomp.lambdas)


@pytest.mark.parametrize("param", [Q(0), Q(1, 2), Q(3), Q(-7, 5)])
def test_family_circuit_number(ft_sos, param):
    cert = circuit_number(ft_sos(param), half_split((3, 3), (6, 0), (0, 6)))
    assert cert.lcm == 2
    assert cert.power_form == 8 * (1 + param * param)
    exact = 2 * math.sqrt(2) * math.sqrt(1 + float(param) ** 2)
    assert abs(cert.float_hint - exact) <= 1e-9 * exact


def test_transformed_circuit_number(ft):
    poly = sos(compose_linear(ft(-1), RationalMatrix([[1, 1], [1, -1]])))
    cert = circuit_number(poly, half_split((4, 2), (6, 0), (2, 4)))
    # coefficients 8 at (6,0) and 72 at (2,4): (8 / (1/2)) * (72 / (1/2))
    assert poly.coefficient((6, 0)) == 8 and poly.coefficient((2, 4)) == 72
    assert cert.power_form == 2304
    assert abs(cert.float_hint - 48) < 1e-9
    assert sufficient_inequality(poly, cert, Q(1, 1000), True)


def test_singleton_circuit_is_the_coefficient():
    poly = parse_polynomial("5*x1^2 + x2^2", 2)
    cert = circuit_number(poly, CaratheodoryDecomposition((2, 0), ((2, 0),), (Q(1),)))
    assert cert.lcm == 1 and cert.power_form == 5


def test_zero_weight_factor_is_skipped():
    poly = parse_polynomial("x1^2 + x2^2", 2)
    decomp = CaratheodoryDecomposition((2, 0), ((2, 0), (0, 2)), (Q(1), Q(0)), minimal=False)
    assert circuit_number(poly, decomp).power_form == 1


def test_circuit_needs_positive_support():
    poly = parse_polynomial("x1^2 - x2^2", 2)
    with pytest.raises(ValueError):
        circuit_number(poly, half_split((1, 1), (2, 0), (0, 2)))


@pytest.mark.parametrize("param,holds", [(Q(0), True), (Q(-1, 2), True), (Q(2), True), (Q(-1), False), (Q(5), True)])
def test_sufficient_inequality_family(ft_sos, param, holds):
    poly = ft_sos(param)
    cert = circuit_number(poly, half_split((3, 3), (6, 0), (0, 6)))
    assert sufficient_inequality(poly, cert, 1, alpha_star_even=False) is holds


def test_boundary_is_exact_equality(ft_sos):
    poly = ft_sos(-1)
    cert = circuit_number(poly, half_split((3, 3), (6, 0), (0, 6)))
    assert abs(poly.coefficient((3, 3))) ** 2 == cert.power_form == 16
    assert theta_compare(4, 1, cert) == 0


def test_zero_coefficient_even_case():
    poly = parse_polynomial("x1^4 + x2^4", 2)
    cert = circuit_number(poly, half_split((2, 2), (4, 0), (0, 4)))
    assert sufficient_inequality(poly, cert, Q(1, 100), True)
    with pytest.raises(ValueError):
        sufficient_inequality(poly, cert, 0, True)


def test_necessary_examples(ft_sos):
    poly = parse_polynomial("x1^4 + x2^4 - 3*x1^2*x2^2", 2)
    v = necessary_condition_check(poly, classify_support(poly))
    assert not v.passed and v.clause == "IrregC1"
    assert v.witness["circuit"]["power_form"] == "4"
    poly = parse_polynomial("x1^2", 2)
    v = necessary_condition_check(poly, classify_support(poly))
    assert not v.passed and v.clause == "C3" and v.witness == {"missing_axes": [2]}
    for param in (0, 2, Q(-1, 2), 5, -1):
        poly = ft_sos(param)
        assert necessary_condition_check(poly, classify_support(poly)).passed
    # |2(1-t)|^2 = 36 <= 40 at t = -2: that map is refuted through its Jacobian instead
    assert necessary_condition_check(ft_sos(-2), classify_support(ft_sos(-2))).passed
    poly = parse_polynomial("x1^2 + x2^2 + 3*x1*x2", 2)
    v = necessary_condition_check(poly, classify_support(poly))
    assert not v.passed and v.clause == "IrregC2"


def test_necessary_inapplicable_when_two_degenerate_points_share_a_face():
    poly = parse_polynomial("x1^6 + x2^6 + x1^4*x2^2 + x1^2*x2^4", 2)
    v = necessary_condition_check(poly, classify_support(poly))
    assert v.passed
    assert set(v.inapplicable) == {(4, 2), (2, 4)}


def test_sufficient_weights(ft_sos):
    poly = parse_polynomial("x1^6 + x2^6 - 1/2*x1^4*x2^2 - x1^2*x2^4", 2)
    gem = classify_support(poly)
    assert not sufficient_condition_check(poly, gem).passed
    assert sufficient_condition_check(poly, gem, strategy="proportional").passed
    good = {(4, 2): Q(2, 5), (2, 4): Q(3, 5)}
    res = sufficient_condition_check(poly, gem, weights=good)
    assert res.passed and res.weights == good
    with pytest.raises(ValueError):
        sufficient_condition_check(poly, gem, weights={(4, 2): Q(2, 3), (2, 4): Q(2, 3)})
    with pytest.raises(ValueError):
        sufficient_condition_check(poly, gem, weights={(4, 2): Q(1, 2)})


def _random_instance(rng):
    # alpha* = (a+b)/2 for two random even vertices; positive vertex coefficients
    a = (2 * rng.randint(1, 4), 2 * rng.randint(0, 4))
    b = (2 * rng.randint(0, 4), 2 * rng.randint(1, 4))
    while b == a:
        b = (b[0], b[1] + 2)
    ca = Q(rng.randint(1, 30), rng.randint(1, 7))
    cb = Q(rng.randint(1, 30), rng.randint(1, 7))
    poly = Polynomial(2, {a: ca, b: cb})
    return poly, half_split(tuple((pt + ypt) // 2 for pt, ypt in zip(a, b)), a, b), ca, cb


def test_exact_order_matches_high_precision():
    mpmath.mp.dps = 60
    rng = random.Random(11)
    checked = 0
    for _ in range(100):
        poly, decomp, ca, cb = _random_instance(rng)
        cert = circuit_number(poly, decomp)
        theta = mpmath.sqrt(mpmath.mpf(ca.numerator) / ca.denominator * 2 * mpmath.mpf(cb.numerator) / cb.denominator * 2)
        value = Q(rng.randint(1, 200), rng.randint(1, 9))
        weight = Q(rng.randint(1, 9), rng.randint(1, 9))
        diff = mpmath.mpf(value.numerator) / value.denominator - mpmath.mpf(weight.numerator) / weight.denominator * theta
        expected = 0 if abs(diff) < mpmath.mpf(10) ** -40 else (1 if diff > 0 else -1)
        assert theta_compare(value, weight, cert) == expected
        assert abs(cert.float_hint - float(theta)) <= 1e-9 * float(theta)
        checked += 1
    assert checked == 100
