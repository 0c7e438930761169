import random
from fractions import Fraction

import pytest

from cadkit.heuristics import (
    HEURISTIC_IDS,
    feature_tuple,
    suggest,
    suggest_all,
)
from cadkit.polynomial import (
    PolynomialError,
    PolynomialSystem,
    VariableOrdering,
    parse,
)
from cadkit.projection import ProjectionBudgetError
from tests.conftest import nonzero_random_polynomial


class TestFeatureTuple:
    def test_gmods_reference(self, example_system):
        assert [feature_tuple("gmods", example_system, v) for v in (1, 2, 3)] == [
            (3,),
            (2,),
            (6,),
        ]

    def test_svob_reference(self, example_system):
        assert feature_tuple("svob", example_system, 3) == (4, 4, 4)

    def test_slm_reference(self, example_system):
        assert feature_tuple("slm", example_system, 1) == (3, 1, 3)

    def test_isf_is_ie11_column(self, example_system):
        assert feature_tuple("isf", example_system, 1) == (
            3, 4, 4, 8, 2, 3, 8, 4, 1, 4, 2,
        )

    def test_ipf_arity(self, example_system):
        assert len(feature_tuple("ipf", example_system, 2)) == 22
        assert len(feature_tuple("psf", example_system, 2)) == 11

    def test_avg_entries_are_exact(self, example_system):
        t = feature_tuple("tone", example_system, 1)
        assert isinstance(t[1], Fraction)

    def test_unknown_id(self, example_system):
        with pytest.raises(PolynomialError):
            feature_tuple("pgf", example_system, 1)

    def test_budget_zero_raises(self, example_system):
        for h in ("psf", "ipf"):
            with pytest.raises(ProjectionBudgetError):
                feature_tuple(h, example_system, 1, budget=0.0)


class TestSuggest:
    def test_gmods_reference(self, example_system):
        assert suggest("gmods", example_system) == VariableOrdering((2, 1, 3))

    def test_single_variable(self):
        F = PolynomialSystem.of([parse("x1^2 + 1", 1)])
        for h in HEURISTIC_IDS:
            assert suggest(h, F) == VariableOrdering((1,))

    def test_tie_break_lower_index_first(self):
        # symmetric in x1, x2 so every tuple ties; the index suffix decides
        F = PolynomialSystem.of([parse("x1*x2 + x1 + x2", 2)])
        for h in HEURISTIC_IDS:
            assert suggest(h, F) == VariableOrdering((1, 2))

    def test_determinism(self, example_system):
        first = suggest_all(example_system)
        assert suggest_all(example_system) == first

    def test_scaling_invariance(self, example_system):
        scaled = PolynomialSystem(
            3,
            tuple(
                (f.scale(-3 if i else 11), rel)
                for i, (f, rel) in enumerate(example_system.constraints)
            ),
        )
        for h in HEURISTIC_IDS:
            assert suggest(h, scaled) == suggest(h, example_system)

    def test_permutation_equivariance(self, example_system):
        perm = [3, 1, 2]
        renamed = example_system.rename_variables(perm)
        for h in HEURISTIC_IDS:
            tuples = [feature_tuple(h, example_system, v) for v in (1, 2, 3)]
            if len(set(tuples)) < 3:
                continue
            base = suggest(h, example_system)
            assert suggest(h, renamed) == VariableOrdering(
                tuple(perm[v - 1] for v in base.order)
            )

    def test_gmods_matches_tone_first_component(self):
        rng = random.Random(21)
        for _ in range(25):
            polys = [nonzero_random_polynomial(rng, 3) for _ in range(2)]
            F = PolynomialSystem.of(polys)
            firsts = [feature_tuple("tone", F, v)[0] for v in (1, 2, 3)]
            if len(set(firsts)) < 3:
                continue
            induced = tuple(
                v for _, v in sorted(zip(firsts, (1, 2, 3)))
            )
            assert suggest("gmods", F) == VariableOrdering(induced)

    def test_suggest_all_covers_every_id(self, example_system):
        out = suggest_all(example_system)
        assert set(out) == set(HEURISTIC_IDS)
