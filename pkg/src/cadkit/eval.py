"""Evaluation statistics for ordering predictions.

Absolute accuracy is the share of predictions hitting an absolutely
optimal ordering, relative accuracy the share hitting the tolerance set.
The time ratio compares the predicted ordering's solver time with the best
time t*; both the mean of per-instance ratios and the ratio of totals are
reported since either aggregation is defensible.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Mapping

from cadkit.labeling import LabeledInstance
from cadkit.polynomial import PolynomialError, VariableOrdering


@dataclass(frozen=True)
class InstanceResult:
    instance_id: object
    predicted: VariableOrdering
    t_pred: float
    t_star: float
    ratio: float
    abs_hit: bool
    rel_hit: bool


@dataclass(frozen=True)
class EvalReport:
    abs_acc: float
    rel_acc: float
    time_ratio_mean: float
    time_ratio_total: float
    per_instance: tuple[InstanceResult, ...]

    def to_json(self) -> str:
        return json.dumps(
            {
                "abs_acc": self.abs_acc,
                "rel_acc": self.rel_acc,
                "time_ratio_mean": self.time_ratio_mean,
                "time_ratio_total": self.time_ratio_total,
                "instances": [
                    {
                        "id": r.instance_id,
                        "predicted": list(r.predicted.order),
                        "t_pred": r.t_pred,
                        "t_star": r.t_star,
                        "ratio": r.ratio,
                        "abs_hit": r.abs_hit,
                        "rel_hit": r.rel_hit,
                    }
                    for r in self.per_instance
                ],
            }
        )

    def to_text(self) -> str:
        header = f"{'Abs_Acc %':>10} {'Rel_Acc %':>10} {'Time_Ratio (mean)':>18} {'Time_Ratio (total)':>19}"
        row = (
            f"{self.abs_acc:>10.2f} {self.rel_acc:>10.2f} "
            f"{self.time_ratio_mean:>18.4f} {self.time_ratio_total:>19.4f}"
        )
        return header + "\n" + row


def evaluate(
    predictions: Mapping[object, VariableOrdering],
    instances: Mapping[object, LabeledInstance],
) -> EvalReport:
    """Accuracy and time-ratio report over predicted orderings.

    Predicted orderings that timed out are charged the time limit, matching
    the labeling convention.
    """
    if not predictions:
        raise PolynomialError("no predictions to evaluate")
    results = []
    for key, predicted in predictions.items():
        if key not in instances:
            raise PolynomialError(f"prediction for unknown instance {key!r}")
        inst = instances[key]
        timing = inst.timing_of(predicted)
        results.append(
            InstanceResult(
                instance_id=key,
                predicted=predicted,
                t_pred=timing.seconds,
                t_star=inst.t_star,
                ratio=timing.seconds / inst.t_star,
                abs_hit=predicted in inst.abs_optimal,
                rel_hit=predicted in inst.rel_optimal,
            )
        )
    n = len(results)
    return EvalReport(
        abs_acc=100.0 * sum(r.abs_hit for r in results) / n,
        rel_acc=100.0 * sum(r.rel_hit for r in results) / n,
        time_ratio_mean=sum(r.ratio for r in results) / n,
        time_ratio_total=sum(r.t_pred for r in results)
        / sum(r.t_star for r in results),
        per_instance=tuple(results),
    )


def gap_ratio(instance: LabeledInstance) -> float:
    """Max time within rel_optimal over min time outside it; timeouts count
    as the time limit."""
    inside = [t.seconds for t in instance.timings if t.ordering in instance.rel_optimal]
    outside = [
        t.seconds for t in instance.timings if t.ordering not in instance.rel_optimal
    ]
    if not outside:
        raise PolynomialError("every ordering is relatively optimal")
    return max(inside) / min(outside)


def max_histogram(
    instances: list[LabeledInstance], bin_edges: list[float]
) -> list[int]:
    """Counts of per-instance maximum solver times binned by the edges;
    k edges give k+1 bins, the last unbounded."""
    if list(bin_edges) != sorted(bin_edges):
        raise PolynomialError("bin edges must be ascending")
    counts = [0] * (len(bin_edges) + 1)
    for inst in instances:
        worst = max(t.seconds for t in inst.timings)
        slot = 0
        while slot < len(bin_edges) and worst > bin_edges[slot]:
            slot += 1
        counts[slot] += 1
    return counts
