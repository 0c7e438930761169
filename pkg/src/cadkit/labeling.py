"""Ordering labels, pre-training corpora and dataset splits.

An instance is labeled by timing a CAD backend under all n! orderings.
With t* the fastest finishing time and tolerance tau, the relatively
optimal orderings are those with t <= (1 + tau) * t*; the absolutely
optimal ones attain t* exactly.  A deterministic surrogate backend stands
in for a real solver so the pipeline stays testable without one.
"""

from __future__ import annotations

import itertools
import json
import logging
import random
import shlex
import subprocess
import tempfile
from dataclasses import dataclass, replace
from pathlib import Path

from cadkit.features import FeatureMatrix, ie11, re4
from cadkit.polynomial import (
    Polynomial,
    PolynomialError,
    PolynomialSystem,
    VariableOrdering,
    system_from_record,
    system_to_record,
)
from cadkit.projection import (
    ProjectionBudgetError,
    first_projection_factor_set,
    projection_union,
    squarefree_product,
)
from cadkit.tokenizer import TokenSequence, encode_features, encode_ordering, encode_system

log = logging.getLogger(__name__)

TAU = 0.03
DEFAULT_TIME_LIMIT = 900.0
DEFAULT_FACTORIAL_CAP = 6
SPLITS = ("train", "valid", "test_valid", "test")
TASKS = ("e", "f", "m", "p", "r", "s")
MAX_PRODUCT_TOKENS = 512


class BackendError(PolynomialError):
    """The CAD backend failed for one (system, ordering) pair."""


class AllTimeoutError(PolynomialError):
    """Every ordering timed out; the instance is unusable."""


@dataclass(frozen=True)
class TimingRecord:
    ordering: VariableOrdering
    seconds: float
    timed_out: bool
    time_limit: float

    def __post_init__(self):
        if self.seconds < 0:
            raise PolynomialError("negative timing")
        if self.timed_out and self.seconds != self.time_limit:
            raise PolynomialError("timed-out record must charge the time limit")


@dataclass(frozen=True)
class LabeledInstance:
    system: PolynomialSystem
    timings: tuple[TimingRecord, ...]
    t_star: float
    abs_optimal: tuple[VariableOrdering, ...]
    rel_optimal: tuple[VariableOrdering, ...]
    split: str | None = None

    def timing_of(self, ordering: VariableOrdering) -> TimingRecord:
        for t in self.timings:
            if t.ordering == ordering:
                return t
        raise PolynomialError(f"no timing for ordering {ordering}")


def all_orderings(nvars: int) -> list[VariableOrdering]:
    return [
        VariableOrdering(p) for p in itertools.permutations(range(1, nvars + 1))
    ]


# -- backends -----------------------------------------------------------------


def surrogate_cost(system: PolynomialSystem, ordering: VariableOrdering) -> float:
    """Product over projection levels of (1 + sum of total degrees of the
    level's projection factor set), iterating pf down the ordering.

    A deterministic stand-in for solver time; not claimed to match any real
    CAD implementation's ranking.
    """
    if ordering.nvars != system.nvars:
        raise PolynomialError("ordering does not match system")
    cost = 1.0
    current: list[Polynomial] = system.polynomials
    for v in ordering.order:
        if not current:
            break
        pf = first_projection_factor_set(PolynomialSystem.of(current), v)
        cost *= 1 + sum(f.total_degree() for f in pf)
        current = list(pf.factors)
    return cost


class SurrogateBackend:
    """Deterministic cost-model backend; one cost unit = time_scale seconds."""

    def __init__(self, time_scale: float = 0.001):
        self.time_scale = time_scale

    def run(
        self,
        system: PolynomialSystem,
        ordering: VariableOrdering,
        time_limit: float,
    ) -> TimingRecord:
        seconds = surrogate_cost(system, ordering) * self.time_scale
        if seconds >= time_limit:
            return TimingRecord(ordering, time_limit, True, time_limit)
        return TimingRecord(ordering, seconds, False, time_limit)


class ExternalBackend:
    """Wraps an external solver command.

    The template may use {input_file}, {ordering} and {time_limit}; the
    command must print one line "TIME <seconds>" or "TIMEOUT".
    """

    def __init__(self, command_template: str):
        self.command_template = command_template

    def run(
        self,
        system: PolynomialSystem,
        ordering: VariableOrdering,
        time_limit: float,
    ) -> TimingRecord:
        with tempfile.NamedTemporaryFile(
            "w", suffix=".json", delete=False
        ) as handle:
            json.dump(system_to_record(system), handle)
            input_file = handle.name
        try:
            command = [
                part.format(
                    input_file=input_file,
                    ordering=",".join(f"x{v}" for v in ordering.order),
                    time_limit=time_limit,
                )
                for part in shlex.split(self.command_template)
            ]
            try:
                proc = subprocess.run(
                    command, capture_output=True, text=True, check=False
                )
            except OSError as e:
                raise BackendError(f"backend launch failed: {e}") from e
            if proc.returncode != 0:
                raise BackendError(
                    f"backend exited with {proc.returncode} for {ordering}"
                )
            for line in proc.stdout.splitlines():
                line = line.strip()
                if line == "TIMEOUT":
                    return TimingRecord(ordering, time_limit, True, time_limit)
                if line.startswith("TIME "):
                    seconds = float(line[5:])
                    return TimingRecord(ordering, seconds, False, time_limit)
            raise BackendError("backend printed neither TIME nor TIMEOUT")
        finally:
            Path(input_file).unlink(missing_ok=True)


# -- labeling -----------------------------------------------------------------


def optimal_sets(
    timings: tuple[TimingRecord, ...], tau: float = TAU
) -> tuple[float, tuple[VariableOrdering, ...], tuple[VariableOrdering, ...]]:
    """(t_star, abs_optimal, rel_optimal) from a full timing table."""
    finished = [t for t in timings if not t.timed_out]
    if not finished:
        raise AllTimeoutError("every ordering timed out")
    t_star = min(t.seconds for t in finished)
    abs_opt = tuple(t.ordering for t in finished if t.seconds == t_star)
    rel_opt = tuple(
        t.ordering for t in finished if t.seconds <= (1 + tau) * t_star
    )
    return t_star, abs_opt, rel_opt


def label(
    system: PolynomialSystem,
    backend,
    time_limit: float = DEFAULT_TIME_LIMIT,
    tau: float = TAU,
    factorial_cap: int = DEFAULT_FACTORIAL_CAP,
) -> LabeledInstance:
    """Time every ordering and derive the optimal sets."""
    if system.nvars > factorial_cap:
        raise PolynomialError(
            f"{system.nvars} variables exceeds the n! cap of {factorial_cap}"
        )
    timings = tuple(
        backend.run(system, o, time_limit) for o in all_orderings(system.nvars)
    )
    t_star, abs_opt, rel_opt = optimal_sets(timings, tau)
    return LabeledInstance(system, timings, t_star, abs_opt, rel_opt)


def expand_multilabel(
    instances: list[LabeledInstance],
) -> list[tuple[PolynomialSystem, VariableOrdering]]:
    """One (system, ordering) pair per absolutely optimal ordering.

    Only training and validation instances may be expanded; instances with
    no finishing ordering are dropped with a warning.
    """
    pairs = []
    for inst in instances:
        if inst.split not in ("train", "valid"):
            raise PolynomialError(
                "multi-label expansion applies to train/valid splits only"
            )
        if not inst.abs_optimal:
            log.warning("dropping instance with no finishing ordering")
            continue
        pairs.extend((inst.system, o) for o in inst.abs_optimal)
    return pairs


def assign_splits(count: int, seed: int) -> list[str]:
    """Deterministic 7:1:1:1 split assignment for count instances."""
    if count < 1:
        raise PolynomialError("nothing to split")
    indices = list(range(count))
    random.Random(seed).shuffle(indices)
    bounds = (int(0.7 * count), int(0.8 * count), int(0.9 * count))
    names = [""] * count
    for rank, idx in enumerate(indices):
        if rank < bounds[0]:
            names[idx] = "train"
        elif rank < bounds[1]:
            names[idx] = "valid"
        elif rank < bounds[2]:
            names[idx] = "test_valid"
        else:
            names[idx] = "test"
    return names


def split(instances: list[LabeledInstance], seed: int) -> list[LabeledInstance]:
    """Instances with their split fields assigned."""
    names = assign_splits(len(instances), seed)
    return [replace(inst, split=name) for inst, name in zip(instances, names)]


# -- pre-training corpora -------------------------------------------------------


def exponent_groups(F: PolynomialSystem) -> list[list[tuple[int, ...]]]:
    """Per-polynomial non-constant exponent vectors in canonical order."""
    return [
        [exp for exp, _ in f.sorted_terms() if any(exp)] for f in F
    ]


def product_exponents(F: PolynomialSystem) -> list[tuple[int, ...]]:
    """Non-constant exponent vectors of the product of the polynomials."""
    product = F.polynomials[0]
    for f in F.polynomials[1:]:
        product = product * f
    return [exp for exp, _ in product.sorted_terms() if any(exp)]


def pretrain_record(
    instance_id,
    F: PolynomialSystem,
    task: str,
    scheme: str = "A",
    budget: float | None = 3.0,
) -> dict:
    """One corpus record {id, task, input_tokens, output_tokens, status}.

    status is "ok", "timeout" (task r/s feature budget exceeded) or
    "empty_pf" (task p/s degenerate); non-ok records carry no output and
    are removed by screen().
    """
    if task not in TASKS:
        raise PolynomialError(f"unknown task: {task!r}")
    record = {
        "id": instance_id,
        "task": task,
        "input_tokens": list(encode_system(F, scheme).tokens),
        "output_tokens": None,
        "status": "ok",
    }
    try:
        if task == "e":
            out = encode_features(exponent_groups(F), "e")
        elif task == "f":
            out = encode_features(ie11(F), "f")
        elif task == "m":
            out = encode_features(product_exponents(F), "m")
        elif task == "r":
            out = encode_features(re4(F, budget=budget), "r")
        else:
            base = F if task == "p" else PolynomialSystem.of([squarefree_product(F)])
            members = projection_union(base, budget=budget)
            if not members:
                record["status"] = "empty_pf"
                return record
            out = encode_features(ie11(members), task)
    except ProjectionBudgetError:
        record["status"] = "timeout"
        return record
    record["output_tokens"] = list(out.tokens)
    return record


def finetune_record(
    instance_id,
    system: PolynomialSystem,
    ordering: VariableOrdering,
    scheme: str = "A",
) -> dict:
    """One task_c record: system tokens in, ordering tokens out."""
    return {
        "id": instance_id,
        "task": "c",
        "input_tokens": list(encode_system(system, scheme).tokens),
        "output_tokens": list(encode_ordering(ordering).tokens),
        "status": "ok",
    }


def screen(records: list[dict], task: str) -> list[dict]:
    """Corpus filtering: task_m drops product sequences longer than 512
    tokens, task_p/s drop empty-pf degenerates, task_r/s drop feature
    timeouts."""
    kept = []
    for record in records:
        if record["status"] == "empty_pf" and task in ("p", "s"):
            continue
        if record["status"] == "timeout" and task in ("r", "s"):
            continue
        if record["status"] != "ok":
            continue
        if task == "m" and len(record["output_tokens"]) > MAX_PRODUCT_TOKENS:
            continue
        kept.append(record)
    return kept


# -- serialization --------------------------------------------------------------


def instance_to_record(instance_id, inst: LabeledInstance) -> dict:
    return {
        "id": instance_id,
        "system": system_to_record(inst.system),
        "timings": [
            {
                "order": list(t.ordering.order),
                "seconds": t.seconds,
                "timed_out": t.timed_out,
                "time_limit": t.time_limit,
            }
            for t in inst.timings
        ],
        "t_star": inst.t_star,
        "abs_optimal": [list(o.order) for o in inst.abs_optimal],
        "rel_optimal": [list(o.order) for o in inst.rel_optimal],
        "split": inst.split,
    }


def instance_from_record(record: dict) -> tuple[object, LabeledInstance]:
    timings = tuple(
        TimingRecord(
            VariableOrdering(tuple(t["order"])),
            t["seconds"],
            t["timed_out"],
            t["time_limit"],
        )
        for t in record["timings"]
    )
    inst = LabeledInstance(
        system=system_from_record(record["system"]),
        timings=timings,
        t_star=record["t_star"],
        abs_optimal=tuple(
            VariableOrdering(tuple(o)) for o in record["abs_optimal"]
        ),
        rel_optimal=tuple(
            VariableOrdering(tuple(o)) for o in record["rel_optimal"]
        ),
        split=record.get("split"),
    )
    return record["id"], inst
