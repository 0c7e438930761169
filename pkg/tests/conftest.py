import random

import pytest

from cadkit.polynomial import Polynomial, PolynomialSystem, parse


@pytest.fixture
def example_system() -> PolynomialSystem:
    """The worked three-variable reference system used across the suite."""
    f1 = parse("-6*x1^3*x2 - 4*x1*x2*x3^2 + 2*x2^2*x3 + 1", 3)
    f2 = parse("-5*x3^4 + x3^3 - 7", 3)
    return PolynomialSystem.of([f1, f2], "=")


def random_polynomial(
    rng: random.Random,
    nvars: int,
    max_terms: int = 5,
    max_exp: int = 3,
    coeff_bound: int = 9,
    allow_zero: bool = False,
) -> Polynomial:
    terms = {}
    for _ in range(rng.randint(0 if allow_zero else 1, max_terms)):
        exp = tuple(rng.randint(0, max_exp) for _ in range(nvars))
        coeff = rng.randint(-coeff_bound, coeff_bound)
        if coeff:
            terms[exp] = coeff
    return Polynomial(nvars, terms)


def nonzero_random_polynomial(rng: random.Random, nvars: int, **kw) -> Polynomial:
    while True:
        f = random_polynomial(rng, nvars, **kw)
        if not f.is_zero():
            return f
