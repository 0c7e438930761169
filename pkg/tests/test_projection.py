import random

import pytest

from cadkit.polynomial import (
    Polynomial,
    PolynomialError,
    PolynomialSystem,
    gcd,
    parse,
    squarefree_part,
)
from cadkit.projection import (
    ProjectionBudgetError,
    first_projection_factor_set,
    monic_discriminant,
    normalize_factor,
    projection_union,
    resultant_profile,
    squarefree_basis,
    squarefree_product,
)
from tests.conftest import nonzero_random_polynomial


class TestNormalizeFactor:
    def test_content_and_sign(self):
        assert normalize_factor(parse("-6*x2", 3)) == parse("x2", 3)
        assert normalize_factor(parse("-2*x3", 3)) == parse("x3", 3)

    def test_already_normal(self):
        f = parse("5*x3^4 - x3^3 + 7", 3)
        assert normalize_factor(f) == f

    def test_zero_rejected(self):
        with pytest.raises(PolynomialError):
            normalize_factor(Polynomial.zero(2))


class TestDiscriminantConvention:
    def test_quadratic_in_x2(self):
        # discrim(x2^2 + (x1^2 - 1), x2) = -4*(x1^2 - 1) under this convention
        f = parse("x2^2 + x1^2 - 1", 2)
        assert monic_discriminant(f, 2) == parse("-4*x1^2 + 4", 2)

    def test_general_quadratic(self):
        # b^2 - 4ac for a*v^2 + b*v + c
        f = parse("3*x1^2 + 5*x1 + 2", 1)
        assert monic_discriminant(f, 1) == Polynomial.constant(1, 25 - 4 * 3 * 2)

    def test_degree_requirement(self):
        with pytest.raises(PolynomialError):
            monic_discriminant(parse("x1 + 1", 1), 1)


class TestFirstProjectionFactorSet:
    def test_quadratic_circle(self):
        F = PolynomialSystem.of([parse("x1^2 + x2^2 - 1", 2)])
        pf = first_projection_factor_set(F, 2)
        assert set(pf.factors) == {parse("x1^2 - 1", 2)}

    def test_empty_gv_branch(self):
        F = PolynomialSystem.of([parse("x1 + 1", 2)])
        pf = first_projection_factor_set(F, 2)
        assert set(pf.factors) == {parse("x1 + 1", 2)}

    def test_no_constants_and_no_duplicates(self, example_system):
        for v in (1, 2, 3):
            pf = first_projection_factor_set(example_system, v)
            assert all(f.total_degree() > 0 for f in pf)
            assert len(set(pf.factors)) == len(pf.factors)

    def test_union_size(self, example_system):
        assert len(projection_union(example_system)) == 9

    def test_scaling_invariance(self, example_system):
        scaled = PolynomialSystem(
            3,
            tuple(
                (f.scale(-7 if i == 0 else 1), rel)
                for i, (f, rel) in enumerate(example_system.constraints)
            ),
        )
        for v in (1, 2, 3):
            assert first_projection_factor_set(scaled, v).factors == \
                first_projection_factor_set(example_system, v).factors

    def test_permutation_equivariance(self):
        rng = random.Random(9)
        for _ in range(20):
            polys = [
                nonzero_random_polynomial(rng, 3, max_terms=3, max_exp=2)
                for _ in range(2)
            ]
            if any(f.is_constant() for f in polys):
                continue
            F = PolynomialSystem.of(polys)
            perm = [2, 3, 1]  # x1 -> x2, x2 -> x3, x3 -> x1
            G = F.rename_variables(perm)
            for v in (1, 2, 3):
                # renaming can flip the canonical leading sign, so compare
                # after re-normalizing
                lhs = {
                    normalize_factor(f.rename_variables(perm))
                    for f in first_projection_factor_set(F, v).factors
                }
                rhs = set(first_projection_factor_set(G, perm[v - 1]).factors)
                assert lhs == rhs

    def test_budget_zero_raises(self, example_system):
        with pytest.raises(ProjectionBudgetError):
            projection_union(example_system, budget=0.0)


class TestSquarefreeProduct:
    def test_coprime_inputs(self, example_system):
        f1, f2 = example_system.polynomials
        assert gcd(f1, f2).is_constant()
        p = squarefree_product(example_system)
        assert p == normalize_factor(f1 * f2)

    def test_duplicates_collapse(self):
        f = parse("x1 + 1", 1)
        F = PolynomialSystem.of([f, f])
        assert squarefree_product(F) == f

    def test_repeated_factor(self):
        F = PolynomialSystem.of([parse("(x1 + 1)^2", 1), parse("x1 + 1", 1)])
        assert squarefree_product(F) == parse("x1 + 1", 1)


class TestSquarefreeBasis:
    def test_constants_dropped(self):
        F = PolynomialSystem.of([parse("x1", 1), parse("(x1+1)^2", 1)])
        assert squarefree_basis(F) == [parse("x1", 1), parse("x1 + 1", 1)]

    def test_zero_rejected(self):
        F = PolynomialSystem(1, ((Polynomial.zero(1), "none"), (parse("x1", 1), "none")))
        with pytest.raises(PolynomialError):
            squarefree_basis(F)


class TestResultantProfile:
    def test_reference_columns(self, example_system):
        assert resultant_profile(example_system, 1).as_tuple() == (31, 13, 60, 12)
        assert resultant_profile(example_system, 2).as_tuple() == (19, 11, 40, 12)
        assert resultant_profile(example_system, 3).as_tuple() == (40, 23, 144, 45)

    def test_univariate_quadratic(self):
        F = PolynomialSystem.of([parse("x1^2 - 2", 1)])
        profile = resultant_profile(F, 1)
        assert profile.deg_r == 0 and profile.terms_r == 1

    def test_variable_absent_errors(self):
        F = PolynomialSystem.of([parse("x1 + 1", 2)])
        with pytest.raises(PolynomialError):
            resultant_profile(F, 2)

    def test_deg_sr_bounded(self):
        rng = random.Random(10)
        for _ in range(15):
            f = nonzero_random_polynomial(rng, 2, max_terms=3, max_exp=2)
            if f.is_constant():
                continue
            F = PolynomialSystem.of([f])
            for v in f.variables():
                if squarefree_product(F).involves(v):
                    profile = resultant_profile(F, v)
                    assert profile.deg_sr <= profile.deg_r
