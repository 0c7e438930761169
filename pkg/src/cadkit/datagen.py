"""Random polynomial system generation under the dataset-name grammar.

Dataset names such as REdEn4rCv3 encode the generator configuration: dE
bounds the total degree in 1..2, n4 asks for four constraints, rC makes
every constraint a pure polynomial and v3 fixes three variables.  Codes
whose original semantics are not published (dM, dH, eE, eM, rH, rM, tM,
cM*, p*) are registered as explicit presets; see the PRESETS note below.
"""

from __future__ import annotations

import random
import re
from dataclasses import dataclass, replace

from cadkit.polynomial import Polynomial, PolynomialError, PolynomialSystem

_NAME_RE = re.compile(
    r"^RE"
    r"(?:c(?P<c>[ME]))?"
    r"(?:d(?P<d>[EMH]))?"
    r"(?:e(?P<e>[EM]))?"
    r"n(?P<n>\d+)"
    r"(?:p(?P<p>\d+))?"
    r"(?:r(?P<r>[CHM])|t(?P<t>M))?"
    r"v(?P<v>\d+)$"
)

# Presets for name codes without a published definition.  dE and rC are the
# documented cases; the rest are explicit placeholders chosen to stay within
# the same visual scale, not reconstructions of the original datasets.
DEGREE_CLASSES = {"E": (1, 2), "M": (2, 3), "H": (3, 4)}
RELATION_CLASSES = {
    "C": ("none",),
    "M": ("=",),
    "H": ("=", ">", ">=", "<", "<=", "!="),
}


@dataclass(frozen=True)
class GeneratorSpec:
    """Everything generate() needs; seed fixed means byte-identical output."""

    nvars: int
    nconstraints: int
    degree_range: tuple[int, int] = DEGREE_CLASSES["E"]
    relations: tuple[str, ...] = RELATION_CLASSES["C"]
    term_count_range: tuple[int, int] = (2, 5)
    coefficient_range: tuple[int, int] = (-9, 9)
    seed: int = 0

    def __post_init__(self):
        if self.nvars < 1 or self.nconstraints < 1:
            raise PolynomialError("nvars and nconstraints must be positive")
        for lo, hi in (self.degree_range, self.term_count_range, self.coefficient_range):
            if lo > hi:
                raise PolynomialError("empty range in generator spec")
        if self.degree_range[0] < 1 or self.term_count_range[0] < 1:
            raise PolynomialError("degree and term count must be at least 1")


def parse_dataset_name(name: str) -> GeneratorSpec:
    """GeneratorSpec from a dataset name; unknown fields take defaults."""
    m = _NAME_RE.match(name)
    if m is None:
        raise PolynomialError(f"unparseable dataset name: {name!r}")
    degree = DEGREE_CLASSES[m["d"] or "E"]
    relations = RELATION_CLASSES["M" if m["t"] else (m["r"] or "C")]
    return GeneratorSpec(
        nvars=int(m["v"]),
        nconstraints=int(m["n"]),
        degree_range=degree,
        relations=relations,
    )


def _random_exponent(rng: random.Random, nvars: int, total: int) -> tuple[int, ...]:
    exp = [0] * nvars
    for _ in range(total):
        exp[rng.randrange(nvars)] += 1
    return tuple(exp)


def _random_coefficient(rng: random.Random, lo: int, hi: int) -> int:
    values = [c for c in range(lo, hi + 1) if c != 0]
    if not values:
        raise PolynomialError("coefficient range contains only zero")
    return rng.choice(values)


def _random_polynomial(rng: random.Random, spec: GeneratorSpec) -> Polynomial:
    lo_d, hi_d = spec.degree_range
    lo_t, hi_t = spec.term_count_range
    while True:
        degree = rng.randint(lo_d, hi_d)
        nterms = rng.randint(lo_t, hi_t)
        terms: dict[tuple[int, ...], int] = {}
        # first term pins the intended total degree
        exps = [_random_exponent(rng, spec.nvars, degree)]
        exps += [
            _random_exponent(rng, spec.nvars, rng.randint(0, degree))
            for _ in range(nterms - 1)
        ]
        for exp in exps:
            terms[exp] = _random_coefficient(rng, *spec.coefficient_range)
        f = Polynomial(spec.nvars, terms)
        if not f.is_constant() and f.total_degree() == degree:
            return f


def generate_one(spec: GeneratorSpec, index: int) -> PolynomialSystem:
    """The index-th system of the stream; per-instance RNG derived from the
    seed so parallel and serial generation agree."""
    rng = random.Random(f"{spec.seed}/{index}")
    while True:
        constraints = []
        for _ in range(spec.nconstraints):
            f = _random_polynomial(rng, spec)
            constraints.append((f, rng.choice(spec.relations)))
        system = PolynomialSystem(spec.nvars, tuple(constraints))
        covered = set()
        for f, _ in constraints:
            covered.update(f.variables())
        if len(covered) == spec.nvars:
            return system


def generate(spec: GeneratorSpec, count: int) -> list[PolynomialSystem]:
    """count systems, deterministic under spec.seed."""
    if count < 1:
        raise PolynomialError("count must be at least 1")
    return [generate_one(spec, i) for i in range(count)]


def with_seed(spec: GeneratorSpec, seed: int) -> GeneratorSpec:
    return replace(spec, seed=seed)
