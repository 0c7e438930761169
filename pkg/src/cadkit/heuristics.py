"""Human-designed variable ordering heuristics.

Each heuristic maps a variable to a small feature tuple; the variable
index is appended as a final tie-breaker and the tuples are sorted in
ascending lexicographic order.  The resulting sequence, read greatest
variable first, is the suggested projection ordering.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from cadkit.features import (
    IE11_OPERATORS,
    FeatureOperator,
    Reduction,
    TermMeasure,
    apply_operator,
    ie11,
    max_l,
)
from cadkit.polynomial import PolynomialError, PolynomialSystem, VariableOrdering
from cadkit.projection import projection_union

HEURISTIC_IDS = (
    "svob",
    "svoc",
    "gmods",
    "tone",
    "slm",
    "SmSsAa",
    "SmAaMl",
    "isf",
    "psf",
    "ipf",
)

DEFAULT_PROJECTION_BUDGET = 3.0

_OPS = {op.label: op for op in IE11_OPERATORS}
_OPS["avg_avg_d"] = FeatureOperator(Reduction.AVG, Reduction.AVG, TermMeasure.DEGREE)

# Table rows for the scalar-tuple heuristics; max_l is handled separately.
_TUPLE_HEURISTICS: dict[str, tuple[str, ...]] = {
    "svob": ("max_max_d", "max_max_e", "sum_sum_a"),
    "svoc": ("max_max_d", "max_l", "sum_max_d"),
    "gmods": ("sum_max_d",),
    "tone": ("sum_max_d", "avg_avg_d", "sum_sum_d"),
    "slm": ("sum_max_d", "max_l", "max_max_d"),
    "SmSsAa": ("sum_max_d", "sum_sum_d", "avg_avg_d"),
    "SmAaMl": ("sum_max_d", "avg_avg_d", "max_l"),
}


def _check_id(h: str) -> None:
    if h not in HEURISTIC_IDS:
        raise PolynomialError(f"unknown heuristic id: {h!r}")


def _input_column(F: PolynomialSystem, v: int) -> tuple[int, ...]:
    return tuple(
        int(apply_operator(op, F, v)) for op in IE11_OPERATORS
    )


def _union_column(members, nvars: int, v: int) -> tuple[int, ...]:
    # an empty projection union (e.g. univariate inputs) scores zero
    if not members:
        return (0,) * len(IE11_OPERATORS)
    return _input_column(PolynomialSystem.of(members), v)


def feature_tuple(
    h: str,
    F: PolynomialSystem,
    v: int,
    budget: float | None = DEFAULT_PROJECTION_BUDGET,
) -> tuple[int | Fraction, ...]:
    """The heuristic's comparison key for variable v, index not included.

    avg_avg_d entries are exact Fractions so comparisons never depend on
    floating point.  psf and ipf compute the full projection union under a
    time budget and raise if it is exceeded.
    """
    _check_id(h)
    if not F.constraints:
        raise PolynomialError("empty polynomial system")
    if h in _TUPLE_HEURISTICS:
        values: list[int | Fraction] = []
        for label in _TUPLE_HEURISTICS[h]:
            if label == "max_l":
                values.append(max_l(F, v))
            else:
                values.append(apply_operator(_OPS[label], F, v))
        return tuple(values)
    if h == "isf":
        return _input_column(F, v)
    members = projection_union(F, budget=budget)
    if h == "psf":
        return _union_column(members, F.nvars, v)
    return _input_column(F, v) + _union_column(members, F.nvars, v)


def suggest(
    h: str,
    F: PolynomialSystem,
    budget: float | None = DEFAULT_PROJECTION_BUDGET,
) -> VariableOrdering:
    """Suggested ordering: keys sorted ascending with the variable index as
    the final component, read greatest (first projected) variable first."""
    _check_id(h)
    if h in ("psf", "ipf"):
        # one union for all variables, shared budget
        members = projection_union(F, budget=budget)
        keyed = []
        for v in range(1, F.nvars + 1):
            key: tuple = _union_column(members, F.nvars, v)
            if h == "ipf":
                key = _input_column(F, v) + key
            keyed.append(key + (v,))
    else:
        keyed = [
            feature_tuple(h, F, v) + (v,) for v in range(1, F.nvars + 1)
        ]
    keyed.sort()
    return VariableOrdering(tuple(key[-1] for key in keyed))


def suggest_all(
    F: PolynomialSystem, budget: float | None = DEFAULT_PROJECTION_BUDGET
) -> dict[str, VariableOrdering]:
    """Every heuristic's suggestion, keyed by heuristic id."""
    return {h: suggest(h, F, budget=budget) for h in HEURISTIC_IDS}
