"""Term-measure/reduction feature algebra and the derived feature matrices.

For a polynomial set F and variable v, three term measures are defined:
degree (exponent of v in the term), appears (0/1 indicator) and effective
(total degree of the term if v occurs in it, else 0).  A feature operator
is an outer reduction over per-polynomial inner reductions of those
measures, e.g. sum_max_d.  Eleven such operators form the ie11 matrix;
re4 stacks the resultant-profile quadruples.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Callable, Sequence

from cadkit.polynomial import Polynomial, PolynomialError, PolynomialSystem, _check_var
from cadkit.projection import Deadline, projection_union, resultant_profile


class TermMeasure(Enum):
    DEGREE = "d"
    APPEARS = "a"
    EFFECTIVE = "e"


class Reduction(Enum):
    SUM = "sum"
    MAX = "max"
    MIN = "min"
    AVG = "avg"


def _reduce(kind: Reduction, values: Sequence) -> Fraction | int:
    if kind is Reduction.SUM:
        return sum(values)
    if kind is Reduction.MAX:
        return max(values)
    if kind is Reduction.MIN:
        return min(values)
    return Fraction(sum(values), len(values))


@dataclass(frozen=True)
class FeatureOperator:
    """Composite reduction outer_inner_measure, e.g. sum_max_d."""

    outer: Reduction
    inner: Reduction
    measure: TermMeasure

    @property
    def label(self) -> str:
        return f"{self.outer.value}_{self.inner.value}_{self.measure.value}"


def _op(outer: str, inner: str, measure: str) -> FeatureOperator:
    return FeatureOperator(Reduction(outer), Reduction(inner), TermMeasure(measure))


# Fixed row order of the 11-operator feature matrix.
IE11_OPERATORS: tuple[FeatureOperator, ...] = (
    _op("sum", "max", "d"),
    _op("sum", "max", "e"),
    _op("sum", "sum", "d"),
    _op("sum", "sum", "e"),
    _op("sum", "sum", "a"),
    _op("max", "max", "d"),
    _op("max", "sum", "e"),
    _op("max", "max", "e"),
    _op("sum", "max", "a"),
    _op("max", "sum", "d"),
    _op("max", "sum", "a"),
)

RE4_ROWS = ("deg_r", "deg_sr", "terms_r", "terms_sr")


@dataclass(frozen=True)
class FeatureMatrix:
    """Row-labeled d x n integer matrix; row-major order is the serialized
    and tokenized form."""

    rows: tuple[str, ...]
    values: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if len(self.rows) != len(self.values):
            raise PolynomialError("row label / value count mismatch")
        widths = {len(r) for r in self.values}
        if len(widths) > 1:
            raise PolynomialError("ragged feature matrix")

    @property
    def ncols(self) -> int:
        return len(self.values[0]) if self.values else 0

    def row_major(self) -> list[int]:
        return [v for row in self.values for v in row]

    def column(self, j: int) -> tuple[int, ...]:
        return tuple(row[j] for row in self.values)

    def to_json(self) -> str:
        return json.dumps(
            {"rows": list(self.rows), "values": [list(r) for r in self.values]}
        )

    @classmethod
    def from_json(cls, text: str) -> "FeatureMatrix":
        data = json.loads(text)
        return cls(tuple(data["rows"]), tuple(tuple(r) for r in data["values"]))


def term_measure(measure: TermMeasure, exp: tuple[int, ...], v: int) -> int:
    e = exp[v - 1]
    if measure is TermMeasure.DEGREE:
        return e
    if measure is TermMeasure.APPEARS:
        return 1 if e else 0
    return sum(exp) if e else 0


def measure_multisets(
    polys: Sequence[Polynomial] | PolynomialSystem, v: int, measure: TermMeasure
) -> list[list[int]]:
    """One inner multiset per polynomial, one entry per term (constant terms
    contribute 0)."""
    if isinstance(polys, PolynomialSystem):
        polys = polys.polynomials
    out = []
    for f in polys:
        _check_var(f.nvars, v)
        out.append([term_measure(measure, exp, v) for exp in f.terms])
    return out


def apply_operator(
    op: FeatureOperator, polys: Sequence[Polynomial] | PolynomialSystem, v: int
) -> int | Fraction:
    """Outer reduction over per-polynomial inner reductions of the measure."""
    if isinstance(polys, PolynomialSystem):
        polys = polys.polynomials
    if not polys:
        raise PolynomialError("empty polynomial collection")
    inner = [
        _reduce(op.inner, values) if values else 0
        for values in measure_multisets(polys, v, op.measure)
    ]
    return _reduce(op.outer, inner)


def ie11(polys: Sequence[Polynomial] | PolynomialSystem) -> FeatureMatrix:
    """The 11 x n feature matrix in the fixed operator row order."""
    if isinstance(polys, PolynomialSystem):
        polys = polys.polynomials
    if not polys:
        raise PolynomialError("empty polynomial collection")
    nvars = polys[0].nvars
    values = tuple(
        tuple(int(apply_operator(op, polys, v)) for v in range(1, nvars + 1))
        for op in IE11_OPERATORS
    )
    return FeatureMatrix(tuple(op.label for op in IE11_OPERATORS), values)


def ie11_projection(F: PolynomialSystem, budget: float | None = None) -> FeatureMatrix:
    """ie11 of the union of first projection factor sets over all variables."""
    members = projection_union(F, budget=budget)
    if not members:
        raise PolynomialError("empty projection factor set")
    return ie11(members)


def re4(F: PolynomialSystem, budget: float | None = None) -> FeatureMatrix:
    """4 x n matrix of resultant-profile quadruples, one column per variable.

    The budget covers the whole matrix, not each column."""
    deadline = Deadline(budget)
    profiles = []
    for v in range(1, F.nvars + 1):
        deadline.require()
        profiles.append(resultant_profile(F, v, deadline=deadline))
    values = tuple(
        tuple(getattr(p, row) for p in profiles) for row in RE4_ROWS
    )
    return FeatureMatrix(RE4_ROWS, values)


def max_l(F: PolynomialSystem, v: int) -> int:
    """Max over polynomials of the total degree of the leading coefficient
    w.r.t. v (0 when v is absent from the polynomial)."""
    best = 0
    for f in F:
        if f.involves(v):
            best = max(best, f.leading_coefficient_wrt(v).total_degree())
    return best


def mean_feature_digit_length(M: FeatureMatrix) -> Fraction:
    """Total decimal digit count across all entries divided by the entry count."""
    entries = M.row_major()
    if not entries:
        raise PolynomialError("empty feature matrix")
    digits = sum(len(str(abs(v))) for v in entries)
    return Fraction(digits, len(entries))
