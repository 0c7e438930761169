import random

import pytest

from cadkit.polynomial import (
    ExactDivisionError,
    ParseError,
    Polynomial,
    PolynomialError,
    PolynomialSystem,
    VariableOrdering,
    discriminant,
    divexact,
    format_polynomial,
    gcd,
    parse,
    resultant,
    squarefree_part,
    sylvester_resultant,
    system_from_record,
    system_to_record,
)
from tests.conftest import nonzero_random_polynomial, random_polynomial


def p(text: str, nvars: int = 3) -> Polynomial:
    return parse(text, nvars)


class TestConstruction:
    def test_zero_and_constant(self):
        assert Polynomial.zero(2).is_zero()
        assert Polynomial.constant(2, 5).constant_value() == 5
        assert Polynomial.constant(2, 0).is_zero()

    def test_zero_coefficients_rejected(self):
        with pytest.raises(PolynomialError):
            Polynomial(2, {(1, 0): 0, (0, 1): 3})

    def test_variable(self):
        assert Polynomial.variable(3, 2) == p("x2")
        with pytest.raises(PolynomialError):
            Polynomial.variable(3, 4)

    def test_immutable(self):
        f = p("x1 + 1")
        with pytest.raises(AttributeError):
            f.nvars = 5

    def test_negative_exponent_rejected(self):
        with pytest.raises(PolynomialError):
            Polynomial(1, {(-1,): 2})


class TestRingLaws:
    def test_random_ring_laws(self):
        rng = random.Random(1)
        zero = Polynomial.zero(3)
        one = Polynomial.constant(3, 1)
        for _ in range(300):
            a = random_polynomial(rng, 3, allow_zero=True)
            b = random_polynomial(rng, 3, allow_zero=True)
            c = random_polynomial(rng, 3, allow_zero=True)
            assert a + b == b + a
            assert a * b == b * a
            assert (a + b) + c == a + (b + c)
            assert (a * b) * c == a * (b * c)
            assert a * (b + c) == a * b + a * c
            assert a + zero == a
            assert a * one == a
            assert a - a == zero
            assert a * zero == zero

    def test_pow(self):
        f = p("x1 + 1", 1)
        assert f ** 0 == Polynomial.constant(1, 1)
        assert f ** 3 == f * f * f
        with pytest.raises(PolynomialError):
            f ** -1


class TestParsePrint:
    def test_round_trip_random(self):
        rng = random.Random(2)
        for _ in range(1000):
            nvars = rng.randint(1, 4)
            f = nonzero_random_polynomial(rng, nvars, coeff_bound=99)
            assert parse(format_polynomial(f), nvars) == f

    def test_canonical_form(self):
        f = p("-6*x1^3*x2 - 4*x1*x2*x3^2 + 2*x2^2*x3 + 1")
        assert format_polynomial(f) == "-6*x1^3*x2 - 4*x1*x2*x3^2 + 2*x2^2*x3 + 1"

    def test_parse_fractions_cleared(self):
        # rational inputs are cleared to integers by the common denominator
        assert parse("(x1 + x1)/2", 1) == p("x1", 1)
        assert parse("x1/2", 1) == p("x1", 1)
        assert parse("x1/2 + 1/3", 1) == p("3*x1 + 2", 1)

    def test_parse_errors_carry_position(self):
        with pytest.raises(ParseError) as e:
            parse("x1 + + 2", 1)
        assert e.value.position >= 0
        with pytest.raises(ParseError):
            parse("x9", 2)
        with pytest.raises(ParseError):
            parse("(x1", 1)

    def test_zero_formats(self):
        assert format_polynomial(Polynomial.zero(2)) == "0"


class TestQueries:
    def test_degrees(self):
        f = p("-6*x1^3*x2 - 4*x1*x2*x3^2 + 2*x2^2*x3 + 1")
        assert f.total_degree() == 4
        assert f.partial_degree(1) == 3
        assert f.partial_degree(3) == 2
        assert f.variables() == [1, 2, 3]

    def test_leading_coefficient_wrt(self):
        f = p("-6*x1^3*x2 - 4*x1*x2*x3^2 + 2*x2^2*x3 + 1")
        assert f.leading_coefficient_wrt(1) == p("-6*x2")
        assert f.leading_coefficient_wrt(3) == p("-4*x1*x2")

    def test_derivative(self):
        f = p("x1^3 + x1*x2", 2)
        assert f.derivative_wrt(1) == p("3*x1^2 + x2", 2)
        assert f.derivative_wrt(2) == p("x1", 2)

    def test_int_content(self):
        assert p("4*x1 + 6", 1).int_content() == 2
        assert p("-3*x1", 1).int_content() == 3

    def test_rename_variables(self):
        f = p("x1^2*x2", 2)
        g = f.rename_variables((2, 1))
        assert g == p("x1*x2^2", 2)


class TestDivexact:
    def test_exact(self):
        f = p("x1^2 - 1", 1)
        assert divexact(f, p("x1 - 1", 1)) == p("x1 + 1", 1)

    def test_not_exact(self):
        with pytest.raises(ExactDivisionError):
            divexact(p("x1^2 + 1", 1), p("x1 - 1", 1))

    def test_random_products(self):
        rng = random.Random(3)
        for _ in range(200):
            a = nonzero_random_polynomial(rng, 2)
            b = nonzero_random_polynomial(rng, 2)
            assert divexact(a * b, b) == a


class TestGcd:
    def test_constructed_common_factor(self):
        rng = random.Random(4)
        for _ in range(120):
            nvars = rng.randint(1, 3)
            g = nonzero_random_polynomial(rng, nvars, max_terms=3, max_exp=2)
            a = nonzero_random_polynomial(rng, nvars, max_terms=3, max_exp=2)
            b = nonzero_random_polynomial(rng, nvars, max_terms=3, max_exp=2)
            d = gcd(g * a, g * b)
            # g divides the gcd, and the gcd divides both products
            divexact(d, gcd(d, g))
            divexact(g * a, d)
            divexact(g * b, d)

    def test_integer_content_included(self):
        assert gcd(p("4*x1", 1), p("6*x1", 1)) == p("2*x1", 1)

    def test_constants(self):
        assert gcd(Polynomial.constant(1, 12), Polynomial.constant(1, 18)) == Polynomial.constant(1, 6)
        assert gcd(Polynomial.zero(1), p("-2*x1", 1)) == p("2*x1", 1)

    def test_positive_lead_normalization(self):
        d = gcd(p("-2*x1^2", 1), p("-4*x1", 1))
        assert d.leading_sign() > 0


class TestSquarefree:
    def test_repeated_factor_removed(self):
        f = p("(x1 + 1)^2 * (x1 - 2)", 1)
        assert squarefree_part(f) == p("(x1 + 1)*(x1 - 2)", 1)

    def test_idempotent(self):
        rng = random.Random(5)
        for _ in range(80):
            f = nonzero_random_polynomial(rng, 2, max_terms=4, max_exp=2)
            if f.is_constant():
                continue
            s = squarefree_part(f)
            assert squarefree_part(s) == s

    def test_content_free_positive_lead(self):
        s = squarefree_part(p("-4*x1^2", 1))
        assert s == p("x1", 1)

    def test_constant_and_zero(self):
        assert squarefree_part(Polynomial.constant(2, 7)) == Polynomial.constant(2, 1)
        with pytest.raises(PolynomialError):
            squarefree_part(Polynomial.zero(2))


class TestResultant:
    def test_known_value(self):
        assert resultant(p("x1^2 - 1", 1), p("x1 - 2", 1), 1) == Polynomial.constant(1, 3)

    def test_sylvester_oracle(self):
        rng = random.Random(6)
        checked = 0
        for _ in range(150):
            nvars = rng.randint(1, 3)
            f = nonzero_random_polynomial(rng, nvars, max_terms=3, max_exp=2)
            g = nonzero_random_polynomial(rng, nvars, max_terms=3, max_exp=2)
            v = rng.randint(1, nvars)
            if f.partial_degree(v) == 0 or g.partial_degree(v) == 0:
                continue
            assert resultant(f, g, v) == sylvester_resultant(f, g, v)
            checked += 1
        assert checked > 50

    def test_antisymmetry(self):
        rng = random.Random(7)
        for _ in range(60):
            f = nonzero_random_polynomial(rng, 2, max_terms=3, max_exp=2)
            g = nonzero_random_polynomial(rng, 2, max_terms=3, max_exp=2)
            df, dg = f.partial_degree(1), g.partial_degree(1)
            if df == 0 or dg == 0:
                continue
            r1 = resultant(f, g, 1)
            r2 = resultant(g, f, 1)
            assert r1 == (r2 if (df * dg) % 2 == 0 else -r2)

    def test_multiplicativity(self):
        rng = random.Random(8)
        for _ in range(40):
            f = nonzero_random_polynomial(rng, 2, max_terms=2, max_exp=2)
            g = nonzero_random_polynomial(rng, 2, max_terms=2, max_exp=2)
            h = nonzero_random_polynomial(rng, 2, max_terms=2, max_exp=2)
            if any(q.partial_degree(1) == 0 for q in (f, g, h)):
                continue
            assert resultant(f * g, h, 1) == resultant(f, h, 1) * resultant(g, h, 1)

    def test_evaluation(self):
        # res(f, x - a) = (-1)^deg(f) * f(a)
        f = p("2*x1^3 - x1 + 5", 1)
        a = 3
        expected = -(2 * a**3 - a + 5)
        assert resultant(f, p(f"x1 - {a}", 1), 1) == Polynomial.constant(1, expected)

    def test_common_factor_gives_zero(self):
        f = p("x1 - 1", 1)
        assert resultant(f * p("x1 + 2", 1), f * p("x1 - 3", 1), 1).is_zero()

    def test_degree_zero_convention(self):
        f = p("x1^2 + 1", 1)
        c = Polynomial.constant(1, 3)
        assert resultant(f, c, 1) == Polynomial.constant(1, 9)
        assert resultant(c, f, 1) == Polynomial.constant(1, 9)


class TestDiscriminant:
    def test_quadratic(self):
        # discr here is the raw res(f, f', v): for ax^2+bx+c it equals -a*(b^2-4ac)... -- no:
        # res(ax^2+bx+c, 2ax+b) = a*(4ac - b^2)
        f = p("2*x1^2 + 3*x1 + 1", 1)
        assert discriminant(f, 1) == Polynomial.constant(1, 2 * (4 * 2 * 1 - 9))

    def test_degree_requirement(self):
        with pytest.raises(PolynomialError):
            discriminant(p("x1 + 1", 1), 1)


class TestSystemsAndOrderings:
    def test_system_validation(self):
        f = p("x1", 2)
        with pytest.raises(PolynomialError):
            PolynomialSystem(2, ())
        with pytest.raises(PolynomialError):
            PolynomialSystem(2, ((f, "bogus"),))

    def test_ordering_validation(self):
        VariableOrdering((2, 1, 3))
        with pytest.raises(PolynomialError):
            VariableOrdering((1, 1, 2))
        with pytest.raises(PolynomialError):
            VariableOrdering((2, 3))

    def test_system_record_round_trip(self, example_system):
        record = system_to_record(example_system)
        assert system_from_record(record) == example_system
