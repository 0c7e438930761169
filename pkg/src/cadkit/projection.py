"""First-level CAD projection: projection factor sets and resultant profiles.

pf(F, v) collects, from a squarefree basis G of F, the polynomials not
involving v together with the leading coefficients, discriminants and
pairwise resultants (w.r.t. v) of those that do, constants discarded.

Convention notes (calibrated against worked reference values):
  - basis members are per-polynomial squarefree parts, content-free with a
    positive leading coefficient under the canonical term order;
  - the discriminant used here divides the resultant res(g, dg/dv, v) by
    lc(g, v) and applies the (-1)^(d(d-1)/2) sign (the division is always
    exact), because the degree/term features downstream are support-based
    and the reference feature values were produced with this convention;
  - returned factors are normalized (content removed, positive lead) and
    deduplicated within one pf(F, v) set; unions across variables are
    concatenations that keep cross-variable repeats.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import reduce

from cadkit.polynomial import (
    Polynomial,
    PolynomialError,
    PolynomialSystem,
    budget_check,
    divexact,
    resultant,
    squarefree_part,
)


class ProjectionBudgetError(PolynomialError):
    """Raised when a projection computation exceeds its time budget."""


# Budgets are denominated in seconds but spent in deterministic work units
# (term pairs scaled by coefficient word counts, polled through the
# polynomial module's budget check), so that a budget-screened corpus is
# byte-identical across runs and machines.  The calibration is approximate
# by design; the budget bounds work, not wall time.
TICKS_PER_SECOND = 80_000_000


class Deadline:
    """Work budget installed as the polynomial module's budget check; long
    eliminant loops abort when the tick allowance runs out."""

    def __init__(self, seconds: float | None):
        self.total = None if seconds is None else max(0, int(seconds * TICKS_PER_SECOND))
        self.used = 0
        self._token = None

    def check(self, weight: int = 1) -> None:
        self.used += weight
        if self.total is not None and self.used > self.total:
            raise ProjectionBudgetError("projection work budget exceeded")

    def require(self) -> None:
        if self.total is not None and self.used >= self.total:
            raise ProjectionBudgetError("projection work budget exceeded")

    def __enter__(self) -> "Deadline":
        if self.total is not None:
            self._token = budget_check.set(self.check)
        return self

    def __exit__(self, *exc) -> None:
        if self._token is not None:
            budget_check.reset(self._token)
            self._token = None


def _as_deadline(budget, deadline: Deadline | None) -> Deadline:
    return deadline if deadline is not None else Deadline(budget)


@dataclass(frozen=True)
class ProjectionFactorSet:
    """Deduplicated non-constant projection factors for one variable."""

    factors: tuple[Polynomial, ...]
    source_variable: int

    def __iter__(self):
        return iter(self.factors)

    def __len__(self):
        return len(self.factors)


@dataclass(frozen=True)
class ResultantProfile:
    """Degrees and term counts of the eliminant r_v and its squarefree part."""

    deg_r: int
    deg_sr: int
    terms_r: int
    terms_sr: int

    def as_tuple(self) -> tuple[int, int, int, int]:
        return (self.deg_r, self.deg_sr, self.terms_r, self.terms_sr)


def normalize_factor(f: Polynomial) -> Polynomial:
    """Remove integer content and make the leading coefficient positive."""
    if f.is_zero():
        raise PolynomialError("cannot normalize the zero polynomial")
    content = f.int_content()
    if f.leading_sign() < 0:
        content = -content
    if content == 1:
        return f
    return Polynomial(f.nvars, {e: c // content for e, c in f.terms.items()})


def monic_discriminant(f: Polynomial, v: int) -> Polynomial:
    """(-1)^(d(d-1)/2) * res(f, df/dv, v) / lc(f, v); exact in the ring."""
    d = f.partial_degree(v)
    if d < 2:
        raise PolynomialError("discriminant needs degree >= 2 in v")
    res = resultant(f, f.derivative_wrt(v), v)
    quotient = divexact(res, f.leading_coefficient_wrt(v))
    if (d * (d - 1) // 2) % 2:
        quotient = -quotient
    return quotient


def squarefree_basis(F: PolynomialSystem) -> list[Polynomial]:
    """Per-polynomial squarefree parts, constants dropped, duplicates kept."""
    basis = []
    for f in F:
        if f.is_zero():
            raise PolynomialError("zero polynomial in system")
        g = squarefree_part(f)
        if not g.is_constant():
            basis.append(g)
    return basis


def first_projection_factor_set(
    F: PolynomialSystem,
    v: int,
    budget: float | None = None,
    deadline: Deadline | None = None,
) -> ProjectionFactorSet:
    """pf(F, v) with v as the projected (greatest) variable."""
    with _as_deadline(budget, deadline) as deadline:
        basis = squarefree_basis(F)
        g_v = [g for g in basis if g.involves(v)]
        g_other = [g for g in basis if not g.involves(v)]
        raw: list[Polynomial] = list(g_other)
        for g in g_v:
            deadline.check()
            lc = g.leading_coefficient_wrt(v)
            raw.append(lc)
            if g.partial_degree(v) >= 2:
                raw.append(monic_discriminant(g, v))
        for i, g in enumerate(g_v):
            for h in g_v[i + 1:]:
                deadline.check()
                raw.append(resultant(g, h, v))
    factors: list[Polynomial] = []
    seen = set()
    for f in raw:
        if f.is_zero() or f.is_constant():
            continue
        f = normalize_factor(f)
        if f not in seen:
            seen.add(f)
            factors.append(f)
    return ProjectionFactorSet(tuple(factors), v)


def projection_union(
    F: PolynomialSystem, budget: float | None = None
) -> list[Polynomial]:
    """Concatenation of pf(F, v) over all variables.

    Cross-variable repeats are kept: the downstream feature reductions sum
    over the members, and the reference values count each per-variable set
    independently.  The budget covers the whole union.
    """
    deadline = Deadline(budget)
    members: list[Polynomial] = []
    for v in range(1, F.nvars + 1):
        deadline.require()
        members.extend(
            first_projection_factor_set(F, v, deadline=deadline).factors
        )
    return members


def squarefree_product(F: PolynomialSystem) -> Polynomial:
    """Squarefree part of the product of all constraint polynomials."""
    for f in F:
        if f.is_zero():
            raise PolynomialError("zero polynomial in system")
    product = reduce(lambda a, b: a * b, F.polynomials)
    return squarefree_part(product)


def resultant_profile(
    F: PolynomialSystem,
    v: int,
    budget: float | None = None,
    deadline: Deadline | None = None,
) -> ResultantProfile:
    """Degrees/term counts of r_v = res(p, dp/dv, v) and its squarefree part,
    where p is the squarefree product of F."""
    with _as_deadline(budget, deadline) as deadline:
        p = squarefree_product(F)
        if not p.involves(v):
            raise PolynomialError(
                f"variable x{v} does not occur in the squarefree product"
            )
        deadline.check()
        r = resultant(p, p.derivative_wrt(v), v)
        deadline.check()
        sr = squarefree_part(r) if not r.is_zero() else r
    return ResultantProfile(
        deg_r=r.total_degree(),
        deg_sr=sr.total_degree(),
        terms_r=r.num_terms(),
        terms_sr=sr.num_terms(),
    )
