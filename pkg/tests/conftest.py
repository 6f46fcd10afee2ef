import random
from fractions import Fraction
from itertools import product

import pytest
from hypothesis import strategies as st

from polydiffeo.poly import Polynomial, PolynomialMap, parse_polynomial


def random_polynomial(rng: random.Random, dim: int, max_deg: int = 3, max_terms: int = 5) -> Polynomial:
    monos = [a for a in product(range(max_deg + 1), repeat=dim) if sum(a) <= max_deg]
    k = rng.randint(1, max_terms)
    terms = {}
    for alpha in rng.sample(monos, min(k, len(monos))):
        c = Fraction(rng.choice([-3, -2, -1, 1, 2, 3]), rng.choice([1, 1, 2, 3]))
        terms[alpha] = c
    return Polynomial(dim, terms)


def random_map(rng: random.Random, dim: int | None = None, max_deg: int = 3, max_terms: int = 5) -> PolynomialMap:
    dim = dim or rng.randint(1, 4)
    return PolynomialMap(tuple(random_polynomial(rng, dim, max_deg, max_terms) for _ in range(dim)))


@st.composite
def polynomials(draw, dim=2, max_deg=3, max_terms=4):
    monos = [a for a in product(range(max_deg + 1), repeat=dim) if sum(a) <= max_deg]
    chosen = draw(st.lists(st.sampled_from(monos), min_size=0, max_size=max_terms, unique=True))
    coeffs = draw(
        st.lists(
            st.fractions(min_value=-4, max_value=4, max_denominator=3),
            min_size=len(chosen),
            max_size=len(chosen),
        )
    )
    return Polynomial(dim, dict(zip(chosen, coeffs)))


@st.composite
def maps(draw, dim=2, max_deg=3, max_terms=3):
    return PolynomialMap(tuple(draw(polynomials(dim, max_deg, max_terms)) for _ in range(dim)))


@pytest.fixture
def ft():
    def build(param):
        param = Fraction(param)
        return PolynomialMap.parse([f"x1 + x1^3 - ({param})*x2^3", "x2 + x1^3 + x2^3"])

    return build


@pytest.fixture
def ft_sos():
    def build(param):
        param = Fraction(param)
        return parse_polynomial(
            f"2*x1^6 + 2*({1 - param})*x1^3*x2^3 + ({1 + param * param})*x2^6 + 2*x1^4 + 2*x1^3*x2"
            f" - 2*({param})*x1*x2^3 + 2*x2^4 + x1^2 + x2^2",
            2,
        )

    return build
