"""Command-line pipeline driver.

Every subcommand reads JSONL from --in (default stdin) and writes JSONL,
CSV or text to --out (default stdout), so stages compose with shell pipes:
gen -> label -> pretrain-labels -> split -> suggest/eval.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from cadkit import datagen, labeling
from cadkit.eval import evaluate, gap_ratio, max_histogram
from cadkit.features import FeatureMatrix, ie11, re4
from cadkit.heuristics import HEURISTIC_IDS, suggest
from cadkit.labeling import (
    BackendError,
    ExternalBackend,
    SurrogateBackend,
    instance_from_record,
    instance_to_record,
)
from cadkit.polynomial import (
    PolynomialError,
    VariableOrdering,
    system_from_record,
    system_to_record,
)
from cadkit.projection import projection_union, squarefree_product
from cadkit.polynomial import PolynomialSystem
from cadkit.tokenizer import Vocabulary, encode_system

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_DATA = 3
EXIT_BACKEND = 4


def _open_in(args):
    return open(args.infile, "r") if args.infile else sys.stdin


def _open_out(args):
    return open(args.out, "w") if args.out else sys.stdout


def _read_jsonl(handle):
    for line in handle:
        line = line.strip()
        if line:
            yield json.loads(line)


def _write_jsonl(handle, records):
    for record in records:
        handle.write(json.dumps(record, sort_keys=True))
        handle.write("\n")


def _read_systems(handle):
    """(id, system) pairs; header records (no constraints) are skipped."""
    for record in _read_jsonl(handle):
        if "constraints" not in record and "system" not in record:
            continue
        body = record.get("system", record)
        yield record.get("id"), system_from_record(body)


def _backend(args):
    if args.backend == "surrogate":
        return SurrogateBackend()
    template = args.backend_cmd or os.environ.get("CADKIT_BACKEND_CMD")
    if not template:
        raise BackendError(
            "external backend requested but no command template given"
        )
    return ExternalBackend(template)


def cmd_gen(args) -> int:
    spec = datagen.parse_dataset_name(args.name)
    spec = datagen.with_seed(spec, args.seed)
    systems = datagen.generate(spec, args.count)
    with _open_out(args) as out:
        header = {
            "spec": {
                "name": args.name,
                "nvars": spec.nvars,
                "nconstraints": spec.nconstraints,
                "degree_range": list(spec.degree_range),
                "relations": list(spec.relations),
                "term_count_range": list(spec.term_count_range),
                "coefficient_range": list(spec.coefficient_range),
                "seed": spec.seed,
            }
        }
        _write_jsonl(out, [header])
        _write_jsonl(
            out,
            (
                {"id": i, **system_to_record(F)}
                for i, F in enumerate(systems)
            ),
        )
    return EXIT_OK


def cmd_label(args) -> int:
    backend = _backend(args)
    records = []
    with _open_in(args) as src:
        for instance_id, system in _read_systems(src):
            try:
                inst = labeling.label(
                    system, backend, time_limit=args.time_limit, tau=args.tau
                )
            except labeling.AllTimeoutError:
                print(
                    f"instance {instance_id}: all orderings timed out, dropped",
                    file=sys.stderr,
                )
                continue
            records.append(instance_to_record(instance_id, inst))
    with _open_out(args) as out:
        _write_jsonl(out, records)
    return EXIT_OK


def cmd_split(args) -> int:
    with _open_in(args) as src:
        records = list(_read_jsonl(src))
    names = labeling.assign_splits(len(records), args.seed)
    for record, name in zip(records, names):
        record["split"] = name
    with _open_out(args) as out:
        _write_jsonl(out, records)
    return EXIT_OK


def cmd_pretrain_labels(args) -> int:
    tasks = args.task.split(",") if args.task != "all" else list(labeling.TASKS)
    with _open_in(args) as src:
        systems = list(_read_systems(src))
    records = []
    for task in tasks:
        produced = [
            labeling.pretrain_record(
                instance_id, F, task, scheme=args.scheme, budget=args.budget
            )
            for instance_id, F in systems
        ]
        if not args.no_screen:
            produced = labeling.screen(produced, task)
        records.extend(produced)
    with _open_out(args) as out:
        _write_jsonl(out, records)
    return EXIT_OK


def cmd_tokenize(args) -> int:
    rows = []
    nvars = None
    with _open_in(args) as src:
        for instance_id, system in _read_systems(src):
            nvars = system.nvars
            rows.append(
                {
                    "id": instance_id,
                    "input_tokens": list(encode_system(system, args.scheme).tokens),
                }
            )
    with _open_out(args) as out:
        if args.vocab and nvars is not None:
            with open(args.vocab, "w") as vf:
                vf.write(Vocabulary(nvars).to_json() + "\n")
        _write_jsonl(out, rows)
    return EXIT_OK


def cmd_suggest(args) -> int:
    rows = []
    with _open_in(args) as src:
        for instance_id, system in _read_systems(src):
            ordering = suggest(args.heuristic, system, budget=args.budget)
            rows.append((instance_id, ordering))
    with _open_out(args) as out:
        if args.format == "text":
            for _, ordering in rows:
                out.write(str(ordering) + "\n")
        else:
            _write_jsonl(
                out,
                (
                    {"id": i, "ordering": list(o.order)}
                    for i, o in rows
                ),
            )
    return EXIT_OK


def cmd_eval(args) -> int:
    with open(args.labels) as handle:
        instances = dict(
            instance_from_record(r) for r in _read_jsonl(handle)
        )
    with open(args.pred) as handle:
        predictions = {
            r["id"]: VariableOrdering(tuple(r["ordering"]))
            for r in _read_jsonl(handle)
        }
    report = evaluate(predictions, instances)
    with _open_out(args) as out:
        if args.format == "json":
            out.write(report.to_json() + "\n")
        elif args.format == "csv":
            out.write("abs_acc,rel_acc,time_ratio_mean,time_ratio_total\n")
            out.write(
                f"{report.abs_acc},{report.rel_acc},"
                f"{report.time_ratio_mean},{report.time_ratio_total}\n"
            )
        else:
            out.write(report.to_text() + "\n")
    return EXIT_OK


def cmd_features(args) -> int:
    rows = []
    with _open_in(args) as src:
        for instance_id, system in _read_systems(src):
            if args.kind == "f":
                matrix = ie11(system)
            elif args.kind == "r":
                matrix = re4(system, budget=args.budget)
            elif args.kind == "p":
                matrix = ie11(projection_union(system, budget=args.budget))
            elif args.kind == "s":
                p = squarefree_product(system)
                matrix = ie11(
                    projection_union(PolynomialSystem.of([p]), budget=args.budget)
                )
            elif args.kind == "e":
                rows.append(
                    {
                        "id": instance_id,
                        "groups": [
                            [list(e) for e in g]
                            for g in labeling.exponent_groups(system)
                        ],
                    }
                )
                continue
            else:
                rows.append(
                    {
                        "id": instance_id,
                        "exponents": [
                            list(e) for e in labeling.product_exponents(system)
                        ],
                    }
                )
                continue
            rows.append(
                {
                    "id": instance_id,
                    "rows": list(matrix.rows),
                    "values": [list(r) for r in matrix.values],
                }
            )
    with _open_out(args) as out:
        _write_jsonl(out, rows)
    return EXIT_OK


def cmd_inspect(args) -> int:
    with _open_in(args) as src, _open_out(args) as out:
        for record in _read_jsonl(src):
            if "constraints" in record or "system" in record:
                body = record.get("system", record)
                system = system_from_record(body)
                out.write(f"# instance {record.get('id')}\n")
                for poly, rel in system.constraints:
                    suffix = "" if rel == "none" else f" {rel} 0"
                    out.write(f"  {poly}{suffix}\n")
            else:
                out.write(json.dumps(record, sort_keys=True) + "\n")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cadkit", description="CAD variable-ordering pipeline"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, infile=True):
        if infile:
            p.add_argument("--in", dest="infile", help="input JSONL (default stdin)")
        p.add_argument("--out", help="output file (default stdout)")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--workers", type=int, default=1)
        p.add_argument(
            "--format", choices=("jsonl", "json", "csv", "text"), default="jsonl"
        )

    p = sub.add_parser("gen", help="generate random systems")
    p.add_argument("--name", required=True, help="dataset name, e.g. REdEn4rCv3")
    p.add_argument("--count", type=int, required=True)
    common(p, infile=False)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("label", help="time all orderings and label")
    p.add_argument("--backend", choices=("surrogate", "external"), default="surrogate")
    p.add_argument("--backend-cmd", help="external command template")
    p.add_argument("--time-limit", type=float, default=labeling.DEFAULT_TIME_LIMIT)
    p.add_argument("--tau", type=float, default=labeling.TAU)
    common(p)
    p.set_defaults(func=cmd_label)

    p = sub.add_parser("split", help="assign 7:1:1:1 splits")
    common(p)
    p.set_defaults(func=cmd_split)

    p = sub.add_parser("pretrain-labels", help="build pre-training corpora")
    p.add_argument("--task", default="all", help="task ids, e.g. e,f or all")
    p.add_argument("--scheme", choices=("A", "B"), default="A")
    p.add_argument("--budget", type=float, default=3.0)
    p.add_argument("--no-screen", action="store_true", help="keep records the screen would drop")
    common(p)
    p.set_defaults(func=cmd_pretrain_labels)

    p = sub.add_parser("tokenize", help="encode systems as token sequences")
    p.add_argument("--scheme", choices=("A", "B"), default="A")
    p.add_argument("--vocab", help="also write the vocabulary JSON here")
    common(p)
    p.set_defaults(func=cmd_tokenize)

    p = sub.add_parser("suggest", help="run a heuristic over systems")
    p.add_argument("--heuristic", choices=HEURISTIC_IDS, required=True)
    p.add_argument("--budget", type=float, default=3.0)
    common(p)
    p.set_defaults(func=cmd_suggest)

    p = sub.add_parser("eval", help="score predictions against labels")
    p.add_argument("--pred", required=True)
    p.add_argument("--labels", required=True)
    common(p, infile=False)
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("features", help="compute feature matrices")
    p.add_argument("--kind", choices=("e", "f", "m", "p", "r", "s"), required=True)
    p.add_argument("--budget", type=float, default=3.0)
    common(p)
    p.set_defaults(func=cmd_features)

    p = sub.add_parser("inspect", help="pretty-print records")
    common(p)
    p.set_defaults(func=cmd_inspect)

    return parser


def run(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except BackendError as e:
        print(f"backend error: {e}", file=sys.stderr)
        return EXIT_BACKEND
    except (
        PolynomialError,
        json.JSONDecodeError,
        KeyError,
        TypeError,
        ValueError,
        OSError,
    ) as e:
        print(f"data error: {e}", file=sys.stderr)
        return EXIT_DATA


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
