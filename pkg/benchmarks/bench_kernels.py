"""Compares the compiled kernel against the pure-Python fallback.

Run directly: python benchmarks/bench_kernels.py
The pure-Python side is exercised in a subprocess with CADKIT_PURE_PYTHON=1
so both implementations are measured under identical import paths.
"""

from __future__ import annotations

import json
import os
import random
import subprocess
import sys
import time


def build_operands(nvars: int, nterms: int, seed: int):
    rng = random.Random(seed)
    def poly():
        terms = {}
        while len(terms) < nterms:
            exp = tuple(rng.randrange(6) for _ in range(nvars))
            terms[exp] = rng.randint(-10**6, 10**6) or 1
        return terms
    return poly(), poly()


def run_case(label: str, nvars: int, nterms: int, repeats: int) -> dict:
    from cadkit import _kernel

    a, b = build_operands(nvars, nterms, seed=11)
    start = time.perf_counter()
    for _ in range(repeats):
        out = _kernel.mul_terms(a, b)
    mul = time.perf_counter() - start
    start = time.perf_counter()
    for _ in range(repeats * 50):
        _kernel.add_terms(out, b)
    add = time.perf_counter() - start
    return {
        "case": label,
        "impl": _kernel.IMPLEMENTATION,
        "mul_s": round(mul, 4),
        "add_s": round(add, 4),
    }


CASES = [
    ("small 3v x 20t", 3, 20, 400),
    ("medium 3v x 120t", 3, 120, 30),
    ("large 4v x 400t", 4, 400, 3),
]


def main() -> None:
    if os.environ.get("CADKIT_BENCH_CHILD"):
        rows = [run_case(label, nv, nt, r) for label, nv, nt, r in CASES]
        print(json.dumps(rows))
        return
    env = dict(os.environ, CADKIT_BENCH_CHILD="1")
    results = {}
    for name, force in (("compiled", None), ("python", "1")):
        child_env = dict(env)
        if force:
            child_env["CADKIT_PURE_PYTHON"] = force
        out = subprocess.run(
            [sys.executable, __file__], env=child_env, capture_output=True, text=True
        )
        if out.returncode != 0:
            print(out.stderr, file=sys.stderr)
            raise SystemExit(1)
        results[name] = json.loads(out.stdout)
    print(f"{'case':<20} {'op':<5} {'compiled':>10} {'python':>10} {'speedup':>8}")
    for fast, slow in zip(results["compiled"], results["python"]):
        if fast["impl"] == slow["impl"]:
            print("note: extension not built; comparing python with itself")
        for op in ("mul_s", "add_s"):
            ratio = slow[op] / fast[op] if fast[op] else float("inf")
            print(
                f"{fast['case']:<20} {op[:3]:<5} {fast[op]:>10} {slow[op]:>10} {ratio:>7.2f}x"
            )


if __name__ == "__main__":
    main()
